#include "mdsep/finstoch.hpp"

#include <cmath>
#include <numeric>

#include "mdsep/errors.hpp"

namespace mdsep::finstoch {
namespace {

std::vector<std::size_t> sizes_of(const Object& o) {
  std::vector<std::size_t> s;
  s.reserve(o.size());
  for (const auto& f : o) s.push_back(f.size());
  return s;
}

void decode(std::size_t index, const std::vector<std::size_t>& sizes, std::vector<std::size_t>& digits) {
  digits.resize(sizes.size());
  for (std::size_t k = sizes.size(); k-- > 0;) {
    digits[k] = index % sizes[k];
    index /= sizes[k];
  }
}

Object pick(const Object& o, std::span<const std::size_t> positions) {
  Object out;
  out.reserve(positions.size());
  for (auto p : positions) {
    if (p >= o.size()) throw DimensionError("factor position " + std::to_string(p) + " out of range");
    out.push_back(o[p]);
  }
  return out;
}

std::vector<std::size_t> concat(std::span<const std::size_t> a, std::span<const std::size_t> b,
                                std::span<const std::size_t> c = {}) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::vector<std::size_t> iota_positions(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), from);
  return out;
}

}  // namespace

Factor make_factor(std::string name, std::size_t cardinality) {
  Factor f{std::move(name), {}};
  for (std::size_t i = 0; i < cardinality; ++i) f.labels.push_back(std::to_string(i));
  return f;
}

std::size_t cardinality(const Object& o) {
  std::size_t n = 1;
  for (const auto& f : o) n *= f.size();
  return n;
}

bool same_shape(const Object& a, const Object& b) { return sizes_of(a) == sizes_of(b); }

std::vector<std::size_t> strides(const Object& o) {
  std::vector<std::size_t> s(o.size(), 1);
  for (std::size_t k = o.size(); k-- > 1;) s[k - 1] = s[k] * o[k].size();
  return s;
}

StochKernel StochKernel::unchecked(Object domain, Object codomain, std::vector<double> table) {
  for (const Object* o : {&domain, &codomain})
    for (const auto& f : *o)
      if (f.size() == 0) throw DimensionError("factor '" + f.name + "' is empty");
  StochKernel k;
  k.rows_ = cardinality(codomain);
  k.cols_ = cardinality(domain);
  if (table.size() != k.rows_ * k.cols_)
    throw DimensionError("table has " + std::to_string(table.size()) + " entries, expected " +
                         std::to_string(k.rows_ * k.cols_));
  k.domain_ = std::move(domain);
  k.codomain_ = std::move(codomain);
  k.table_ = std::move(table);
  return k;
}

StochKernel::StochKernel(Object domain, Object codomain, std::vector<double> table, double tol) {
  *this = unchecked(std::move(domain), std::move(codomain), std::move(table));
  for (std::size_t a = 0; a < cols_; ++a) {
    double sum = 0;
    for (std::size_t y = 0; y < rows_; ++y) {
      const double v = table_[a * rows_ + y];
      if (!(v >= 0)) throw Error("negative or non-finite probability in column " + std::to_string(a));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw Error("column " + std::to_string(a) + " sums to " + std::to_string(sum));
  }
}

StochKernel identity(const Object& x) {
  const std::size_t n = cardinality(x);
  std::vector<double> t(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) t[a * n + a] = 1.0;
  return StochKernel::unchecked(x, x, std::move(t));
}

StochKernel copy(const Object& x) {
  const std::size_t n = cardinality(x);
  std::vector<double> t(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) t[a * n * n + a * n + a] = 1.0;
  Object cod = x;
  cod.insert(cod.end(), x.begin(), x.end());
  return StochKernel::unchecked(x, std::move(cod), std::move(t));
}

StochKernel del(const Object& x) {
  return StochKernel::unchecked(x, {}, std::vector<double>(cardinality(x), 1.0));
}

StochKernel swap(const Object& x, const Object& y) {
  const std::size_t nx = cardinality(x), ny = cardinality(y);
  std::vector<double> t(nx * ny * nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) t[(i * ny + j) * (nx * ny) + j * nx + i] = 1.0;
  Object dom = x, cod = y;
  dom.insert(dom.end(), y.begin(), y.end());
  cod.insert(cod.end(), x.begin(), x.end());
  return StochKernel::unchecked(std::move(dom), std::move(cod), std::move(t));
}

StochKernel compose(const StochKernel& f, const StochKernel& p) {
  if (!same_shape(f.domain(), p.codomain())) throw DimensionError("compose: codomain of p does not match domain of f");
  const std::size_t nx = p.rows(), ny = f.rows(), na = p.cols();
  std::vector<double> t(ny * na, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t x = 0; x < nx; ++x) {
      const double w = p(x, a);
      if (w == 0) continue;
      for (std::size_t y = 0; y < ny; ++y) t[a * ny + y] += f(y, x) * w;
    }
  return StochKernel::unchecked(p.domain(), f.codomain(), std::move(t));
}

StochKernel tensor(const StochKernel& f, const StochKernel& g) {
  const std::size_t rows = f.rows() * g.rows(), cols = f.cols() * g.cols();
  std::vector<double> t(rows * cols, 0.0);
  for (std::size_t a1 = 0; a1 < f.cols(); ++a1)
    for (std::size_t a2 = 0; a2 < g.cols(); ++a2) {
      const std::size_t a = a1 * g.cols() + a2;
      for (std::size_t y1 = 0; y1 < f.rows(); ++y1) {
        const double v = f(y1, a1);
        if (v == 0) continue;
        for (std::size_t y2 = 0; y2 < g.rows(); ++y2) t[a * rows + y1 * g.rows() + y2] = v * g(y2, a2);
      }
    }
  Object dom = f.domain(), cod = f.codomain();
  dom.insert(dom.end(), g.domain().begin(), g.domain().end());
  cod.insert(cod.end(), g.codomain().begin(), g.codomain().end());
  return StochKernel::unchecked(std::move(dom), std::move(cod), std::move(t));
}

StochKernel select(const StochKernel& f, std::span<const std::size_t> positions) {
  Object cod = pick(f.codomain(), positions);
  const auto sizes = sizes_of(f.codomain());
  const auto out_strides = strides(cod);
  const std::size_t rows = cardinality(cod);
  // Precompute the target row of every source row once.
  std::vector<std::size_t> target(f.rows());
  std::vector<std::size_t> digits;
  for (std::size_t y = 0; y < f.rows(); ++y) {
    decode(y, sizes, digits);
    std::size_t r = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) r += digits[positions[k]] * out_strides[k];
    target[y] = r;
  }
  std::vector<double> t(rows * f.cols(), 0.0);
  for (std::size_t a = 0; a < f.cols(); ++a)
    for (std::size_t y = 0; y < f.rows(); ++y) t[a * rows + target[y]] += f(y, a);
  return StochKernel::unchecked(f.domain(), std::move(cod), std::move(t));
}

StochKernel extend(const StochKernel& s, std::span<const std::size_t> inputs, const StochKernel& g) {
  if (!same_shape(pick(s.codomain(), inputs), g.domain()))
    throw DimensionError("extend: kernel domain does not match the selected factors");
  const auto sizes = sizes_of(s.codomain());
  const auto in_strides = strides(g.domain());
  const std::size_t no = g.rows(), rows = s.rows() * no;
  std::vector<double> t(rows * s.cols(), 0.0);
  std::vector<std::size_t> digits;
  for (std::size_t l = 0; l < s.rows(); ++l) {
    decode(l, sizes, digits);
    std::size_t k = 0;
    for (std::size_t j = 0; j < inputs.size(); ++j) k += digits[inputs[j]] * in_strides[j];
    for (std::size_t a = 0; a < s.cols(); ++a) {
      const double p = s(l, a);
      if (p == 0) continue;
      for (std::size_t o = 0; o < no; ++o) t[a * rows + l * no + o] = p * g(o, k);
    }
  }
  Object cod = s.codomain();
  cod.insert(cod.end(), g.codomain().begin(), g.codomain().end());
  return StochKernel::unchecked(s.domain(), std::move(cod), std::move(t));
}

StochKernel conditional(const StochKernel& f, std::span<const std::size_t> x) {
  std::vector<char> in_x(f.codomain().size(), 0);
  for (auto p : x) {
    if (p >= in_x.size()) throw DimensionError("conditional: factor position out of range");
    if (in_x[p]) throw DimensionError("conditional: factor listed twice");
    in_x[p] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t p = 0; p < in_x.size(); ++p)
    if (!in_x[p]) rest.push_back(p);
  const StochKernel g = select(f, concat(x, rest));
  const std::size_t nx = cardinality(pick(f.codomain(), x));
  const std::size_t nr = g.rows() / nx;
  const std::size_t na = f.cols();

  // Domain X ⊗ A: column index xi * na + a.
  std::vector<double> t(nr * nx * na, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t xi = 0; xi < nx; ++xi) {
      double mass = 0;
      for (std::size_t r = 0; r < nr; ++r) mass += g(xi * nr + r, a);
      double* col = &t[(xi * na + a) * nr];
      for (std::size_t r = 0; r < nr; ++r)
        col[r] = mass > 0 ? g(xi * nr + r, a) / mass : 1.0 / static_cast<double>(nr);
    }
  Object dom = pick(f.codomain(), x);
  dom.insert(dom.end(), f.domain().begin(), f.domain().end());
  return StochKernel::unchecked(std::move(dom), pick(f.codomain(), rest), std::move(t));
}

StochKernel with_uniform_prior(const StochKernel& f) {
  const std::size_t na = f.cols(), ny = f.rows();
  std::vector<double> t(na * ny);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t y = 0; y < ny; ++y) t[a * ny + y] = f(y, a) / static_cast<double>(na);
  Object cod = f.domain();
  cod.insert(cod.end(), f.codomain().begin(), f.codomain().end());
  return StochKernel::unchecked({}, std::move(cod), std::move(t));
}

bool ci_state(const StochKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
              std::span<const std::size_t> z, double tol) {
  if (!f.is_state()) throw Error("ci_state needs a kernel with trivial domain; use ci_kernel");
  if (x.empty() || y.empty()) return true;
  const StochKernel g = select(f, concat(x, y, z));
  const std::size_t nx = cardinality(pick(f.codomain(), x));
  const std::size_t ny = cardinality(pick(f.codomain(), y));
  const std::size_t nz = cardinality(pick(f.codomain(), z));
  std::vector<double> fxz(nx * nz, 0.0), fyz(ny * nz, 0.0), fz(nz, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const double v = g((i * ny + j) * nz + k, 0);
        fxz[i * nz + k] += v;
        fyz[j * nz + k] += v;
        fz[k] += v;
      }
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const double lhs = g((i * ny + j) * nz + k, 0) * fz[k];
        if (std::abs(lhs - fxz[i * nz + k] * fyz[j * nz + k]) > tol) return false;
      }
  return true;
}

bool ci_kernel(const StochKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
               std::span<const std::size_t> z, double tol) {
  if (x.empty()) return true;
  const StochKernel g = select(f, concat(x, y, z));
  const std::size_t nx = cardinality(pick(f.codomain(), x));
  const std::size_t ny = cardinality(pick(f.codomain(), y));
  const std::size_t nz = cardinality(pick(f.codomain(), z));
  const std::size_t na = f.cols();
  auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t a) { return g((i * ny + j) * nz + k, a); };

  std::vector<double> fyz(ny * nz * na, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t k = 0; k < nz; ++k) fyz[(a * ny + j) * nz + k] += at(i, j, k, a);

  for (std::size_t k = 0; k < nz; ++k) {
    // Candidate k(.|z) from the best-supported (a, y); unsupported z is free.
    double best = 0;
    std::size_t best_a = 0, best_j = 0;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t j = 0; j < ny; ++j)
        if (fyz[(a * ny + j) * nz + k] > best) {
          best = fyz[(a * ny + j) * nz + k];
          best_a = a;
          best_j = j;
        }
    if (best <= 0) continue;
    std::vector<double> cand(nx);
    for (std::size_t i = 0; i < nx; ++i) cand[i] = at(i, best_j, k, best_a) / best;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t j = 0; j < ny; ++j) {
        const double m = fyz[(a * ny + j) * nz + k];
        for (std::size_t i = 0; i < nx; ++i)
          if (std::abs(at(i, j, k, a) - cand[i] * m) > tol) return false;
      }
  }
  return true;
}

StochKernel factor_kernel(const StochKernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out) {
  const StochKernel joint = with_uniform_prior(f);
  const std::size_t shift = f.domain().size();
  std::vector<std::size_t> positions;
  for (auto p : in) positions.push_back(p + shift);
  for (auto p : out) positions.push_back(p + shift);
  return conditional(select(joint, positions), iota_positions(0, in.size()));
}

double max_abs_diff(const StochKernel& a, const StochKernel& b) {
  if (!same_shape(a.domain(), b.domain()) || !same_shape(a.codomain(), b.codomain()))
    throw DimensionError("max_abs_diff: kernels have different shapes");
  double m = 0;
  for (std::size_t i = 0; i < a.table().size(); ++i) m = std::max(m, std::abs(a.table()[i] - b.table()[i]));
  return m;
}

StochKernel rename_factors(const StochKernel& f, const std::vector<std::string>& domain,
                        const std::vector<std::string>& codomain) {
  if (domain.size() != f.domain().size() || codomain.size() != f.codomain().size())
    throw DimensionError("rename_factors: wrong number of names");
  Object dom = f.domain(), cod = f.codomain();
  for (std::size_t k = 0; k < dom.size(); ++k) dom[k].name = domain[k];
  for (std::size_t k = 0; k < cod.size(); ++k) cod[k].name = codomain[k];
  return StochKernel::unchecked(std::move(dom), std::move(cod), f.table());
}

}  // namespace mdsep::finstoch
