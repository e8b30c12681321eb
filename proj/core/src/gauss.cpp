#include "mdsep/gauss.hpp"

#include <algorithm>
#include <cmath>

#include "mdsep/errors.hpp"

namespace mdsep::gauss {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Rows = std::vector<Index>;

Object pick(const Object& o, std::span<const std::size_t> positions) {
  Object out;
  for (auto p : positions) {
    if (p >= o.size()) throw DimensionError("factor position " + std::to_string(p) + " out of range");
    out.push_back(o[p]);
  }
  return out;
}

// Scalar coordinates covered by the factors at `positions`, in that order.
Rows coordinates(const Object& o, std::span<const std::size_t> positions) {
  std::vector<Index> offset(o.size() + 1, 0);
  for (std::size_t k = 0; k < o.size(); ++k) offset[k + 1] = offset[k] + static_cast<Index>(o[k].dim);
  Rows out;
  for (auto p : positions) {
    if (p >= o.size()) throw DimensionError("factor position " + std::to_string(p) + " out of range");
    for (Index i = offset[p]; i < offset[p + 1]; ++i) out.push_back(i);
  }
  return out;
}

MatrixXd rows_of(const MatrixXd& m, const Rows& r) {
  MatrixXd out(static_cast<Index>(r.size()), m.cols());
  for (std::size_t i = 0; i < r.size(); ++i) out.row(static_cast<Index>(i)) = m.row(r[i]);
  return out;
}

MatrixXd block_of(const MatrixXd& m, const Rows& r, const Rows& c) {
  MatrixXd out(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(r[i], c[j]);
  return out;
}

VectorXd entries_of(const VectorXd& v, const Rows& r) {
  VectorXd out(static_cast<Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) out(static_cast<Index>(i)) = v(r[i]);
  return out;
}

Index as_index(std::size_t n) { return static_cast<Index>(n); }

std::vector<std::size_t> all_positions(const Object& o) {
  std::vector<std::size_t> p(o.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = k;
  return p;
}

Object concat(Object a, const Object& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::size_t dimension(const Object& o) {
  std::size_t n = 0;
  for (const auto& f : o) n += f.dim;
  return n;
}

bool same_shape(const Object& a, const Object& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](const Factor& x, const Factor& y) { return x.dim == y.dim; });
}

GaussKernel::GaussKernel() : a_(0, 0), b_(0), s_(0, 0) {}

GaussKernel GaussKernel::unchecked(Object domain, Object codomain, MatrixXd a, VectorXd b, MatrixXd s) {
  const Index n = as_index(dimension(domain)), m = as_index(dimension(codomain));
  if (a.rows() != m || a.cols() != n)
    throw DimensionError("linear map is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         ", expected " + std::to_string(m) + "x" + std::to_string(n));
  if (b.size() != m) throw DimensionError("offset has length " + std::to_string(b.size()) + ", expected " + std::to_string(m));
  if (s.rows() != m || s.cols() != m) throw DimensionError("covariance is not " + std::to_string(m) + "x" + std::to_string(m));
  GaussKernel k;
  k.domain_ = std::move(domain);
  k.codomain_ = std::move(codomain);
  k.a_ = std::move(a);
  k.b_ = std::move(b);
  k.s_ = std::move(s);
  return k;
}

GaussKernel::GaussKernel(Object domain, Object codomain, MatrixXd a, VectorXd b, MatrixXd s) {
  *this = unchecked(std::move(domain), std::move(codomain), std::move(a), std::move(b), std::move(s));
  if (s_.size() > 0) {
    if (!s_.allFinite() || !a_.allFinite() || !b_.allFinite()) throw Error("non-finite entry in Gaussian kernel");
    const double asym = (s_ - s_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol) throw Error("covariance is not symmetric (deviation " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s_, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -kPsdTol) throw Error("covariance is not positive semidefinite (eigenvalue " + std::to_string(lo) + ")");
  }
}

MatrixXd psd_pinv(const MatrixXd& m) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  const VectorXd& ev = es.eigenvalues();
  const double cutoff = std::max(1e-13, 1e-10 * ev.cwiseAbs().maxCoeff());
  VectorXd inv(ev.size());
  for (Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cutoff ? 1.0 / ev(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

GaussKernel identity(const Object& x) {
  const Index n = as_index(dimension(x));
  return GaussKernel::unchecked(x, x, MatrixXd::Identity(n, n), VectorXd::Zero(n), MatrixXd::Zero(n, n));
}

GaussKernel copy(const Object& x) {
  const Index n = as_index(dimension(x));
  MatrixXd a(2 * n, n);
  a << MatrixXd::Identity(n, n), MatrixXd::Identity(n, n);
  return GaussKernel::unchecked(x, concat(x, x), a, VectorXd::Zero(2 * n), MatrixXd::Zero(2 * n, 2 * n));
}

GaussKernel del(const Object& x) {
  const Index n = as_index(dimension(x));
  return GaussKernel::unchecked(x, {}, MatrixXd::Zero(0, n), VectorXd::Zero(0), MatrixXd::Zero(0, 0));
}

GaussKernel swap(const Object& x, const Object& y) {
  const Index nx = as_index(dimension(x)), ny = as_index(dimension(y));
  MatrixXd a = MatrixXd::Zero(nx + ny, nx + ny);
  a.block(0, nx, ny, ny) = MatrixXd::Identity(ny, ny);
  a.block(ny, 0, nx, nx) = MatrixXd::Identity(nx, nx);
  return GaussKernel::unchecked(concat(x, y), concat(y, x), a, VectorXd::Zero(nx + ny), MatrixXd::Zero(nx + ny, nx + ny));
}

GaussKernel compose(const GaussKernel& g, const GaussKernel& f) {
  if (!same_shape(g.domain(), f.codomain())) throw DimensionError("compose: codomain of f does not match domain of g");
  return GaussKernel::unchecked(f.domain(), g.codomain(), g.a() * f.a(), g.a() * f.b() + g.b(),
                                g.a() * f.s() * g.a().transpose() + g.s());
}

GaussKernel tensor(const GaussKernel& f, const GaussKernel& g) {
  const Index m1 = f.a().rows(), n1 = f.a().cols(), m2 = g.a().rows(), n2 = g.a().cols();
  MatrixXd a = MatrixXd::Zero(m1 + m2, n1 + n2);
  a.topLeftCorner(m1, n1) = f.a();
  a.bottomRightCorner(m2, n2) = g.a();
  VectorXd b(m1 + m2);
  b << f.b(), g.b();
  MatrixXd s = MatrixXd::Zero(m1 + m2, m1 + m2);
  s.topLeftCorner(m1, m1) = f.s();
  s.bottomRightCorner(m2, m2) = g.s();
  return GaussKernel::unchecked(concat(f.domain(), g.domain()), concat(f.codomain(), g.codomain()), a, b, s);
}

GaussKernel select(const GaussKernel& f, std::span<const std::size_t> positions) {
  const Rows r = coordinates(f.codomain(), positions);
  return GaussKernel::unchecked(f.domain(), pick(f.codomain(), positions), rows_of(f.a(), r), entries_of(f.b(), r),
                                block_of(f.s(), r, r));
}

GaussKernel extend(const GaussKernel& s, std::span<const std::size_t> inputs, const GaussKernel& g) {
  if (!same_shape(pick(s.codomain(), inputs), g.domain()))
    throw DimensionError("extend: kernel domain does not match the selected factors");
  const Rows r = coordinates(s.codomain(), inputs);
  const Index m = s.a().rows(), k = g.a().rows();
  // G P, with P the selection of the input coordinates.
  MatrixXd gp = MatrixXd::Zero(k, m);
  for (std::size_t j = 0; j < r.size(); ++j) gp.col(r[j]) += g.a().col(static_cast<Index>(j));

  MatrixXd a(m + k, s.a().cols());
  a << s.a(), gp * s.a();
  VectorXd b(m + k);
  b << s.b(), gp * s.b() + g.b();
  MatrixXd cov(m + k, m + k);
  const MatrixXd cross = gp * s.s();
  cov << s.s(), cross.transpose(), cross, cross * gp.transpose() + g.s();
  return GaussKernel::unchecked(s.domain(), concat(s.codomain(), g.codomain()), a, b, cov);
}

GaussKernel conditional(const GaussKernel& f, std::span<const std::size_t> x) {
  std::vector<char> in_x(f.codomain().size(), 0);
  for (auto p : x) {
    if (p >= in_x.size()) throw DimensionError("conditional: factor position out of range");
    if (in_x[p]) throw DimensionError("conditional: factor listed twice");
    in_x[p] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t p = 0; p < in_x.size(); ++p)
    if (!in_x[p]) rest.push_back(p);
  const Rows rx = coordinates(f.codomain(), x), rr = coordinates(f.codomain(), rest);
  const MatrixXd sxx = block_of(f.s(), rx, rx), srx = block_of(f.s(), rr, rx), srr = block_of(f.s(), rr, rr);
  const MatrixXd gain = srx * psd_pinv(sxx);

  const Index nx = as_index(rx.size()), nr = as_index(rr.size()), na = f.a().cols();
  MatrixXd a(nr, nx + na);
  a << gain, rows_of(f.a(), rr) - gain * rows_of(f.a(), rx);
  const VectorXd b = entries_of(f.b(), rr) - gain * entries_of(f.b(), rx);
  MatrixXd cov = srr - gain * srx.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return GaussKernel::unchecked(concat(pick(f.codomain(), x), f.domain()), pick(f.codomain(), rest), a, b, cov);
}

GaussKernel with_standard_prior(const GaussKernel& f) {
  const Index n = f.a().cols(), m = f.a().rows();
  MatrixXd a(n + m, 0);
  VectorXd b(n + m);
  b << VectorXd::Zero(n), f.b();
  MatrixXd s(n + m, n + m);
  s << MatrixXd::Identity(n, n), f.a().transpose(), f.a(), f.a() * f.a().transpose() + f.s();
  return GaussKernel::unchecked({}, concat(f.domain(), f.codomain()), a, b, s);
}

bool ci_state(const GaussKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
              std::span<const std::size_t> z, double tol) {
  if (!f.is_state()) throw Error("ci_state needs a kernel with trivial domain; use ci_kernel");
  const Rows rx = coordinates(f.codomain(), x), ry = coordinates(f.codomain(), y), rz = coordinates(f.codomain(), z);
  if (rx.empty() || ry.empty()) return true;
  MatrixXd partial = block_of(f.s(), rx, ry);
  if (!rz.empty()) partial -= block_of(f.s(), rx, rz) * psd_pinv(block_of(f.s(), rz, rz)) * block_of(f.s(), rz, ry);
  return partial.cwiseAbs().maxCoeff() <= tol;
}

bool ci_kernel(const GaussKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
               std::span<const std::size_t> z, double tol) {
  if (x.empty()) return true;
  if (f.is_state()) return ci_state(f, x, y, z, tol);
  const std::size_t shift = f.domain().size();
  auto shifted = [&](std::span<const std::size_t> p) {
    std::vector<std::size_t> out;
    for (auto q : p) out.push_back(q + shift);
    return out;
  };
  std::vector<std::size_t> ys = all_positions(f.domain());
  for (auto q : y) ys.push_back(q + shift);
  return ci_state(with_standard_prior(f), shifted(x), ys, shifted(z), tol);
}

GaussKernel factor_kernel(const GaussKernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out) {
  const GaussKernel joint = with_standard_prior(f);
  const std::size_t shift = f.domain().size();
  std::vector<std::size_t> positions, first;
  for (auto p : in) positions.push_back(p + shift);
  for (auto p : out) positions.push_back(p + shift);
  for (std::size_t k = 0; k < in.size(); ++k) first.push_back(k);
  return conditional(select(joint, positions), first);
}

double max_abs_diff(const GaussKernel& x, const GaussKernel& y) {
  if (!same_shape(x.domain(), y.domain()) || !same_shape(x.codomain(), y.codomain()))
    throw DimensionError("max_abs_diff: kernels have different shapes");
  double m = 0;
  if (x.a().size()) m = std::max(m, (x.a() - y.a()).cwiseAbs().maxCoeff());
  if (x.b().size()) m = std::max(m, (x.b() - y.b()).cwiseAbs().maxCoeff());
  if (x.s().size()) m = std::max(m, (x.s() - y.s()).cwiseAbs().maxCoeff());
  return m;
}

GaussKernel rename_factors(const GaussKernel& f, const std::vector<std::string>& domain,
                        const std::vector<std::string>& codomain) {
  if (domain.size() != f.domain().size() || codomain.size() != f.codomain().size())
    throw DimensionError("rename_factors: wrong number of names");
  Object dom = f.domain(), cod = f.codomain();
  for (std::size_t k = 0; k < dom.size(); ++k) dom[k].name = domain[k];
  for (std::size_t k = 0; k < cod.size(); ++k) cod[k].name = codomain[k];
  return GaussKernel::unchecked(std::move(dom), std::move(cod), f.a(), f.b(), f.s());
}

}  // namespace mdsep::gauss
