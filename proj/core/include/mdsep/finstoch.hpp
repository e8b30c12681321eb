#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mdsep::finstoch {

inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kDefaultTol = 1e-9;

// One tensor factor: a finite set with labelled values.
struct Factor {
  std::string name;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return labels.size(); }
  friend bool operator==(const Factor&, const Factor&) = default;
};

// An object of FinStoch as an ordered list of factors; empty is the unit.
using Object = std::vector<Factor>;

// Values "0".."n-1".
Factor make_factor(std::string name, std::size_t cardinality);
std::size_t cardinality(const Object& o);
// Same cardinalities factor by factor. Names and labels are not compared.
bool same_shape(const Object& a, const Object& b);

// Mixed-radix index over an object; the first factor is most significant.
std::vector<std::size_t> strides(const Object& o);

// A Markov kernel f: domain -> codomain as a column-stochastic table. The
// column for domain value a is stored contiguously: table[a * rows + y]
// holds f(y | a).
class StochKernel {
 public:
  StochKernel() = default;
  // Throws DimensionError on a size mismatch, Error on a negative entry or a
  // column whose sum is off by more than `tol`.
  StochKernel(Object domain, Object codomain, std::vector<double> table, double tol = kConstructionTol);

  // Skips the stochasticity check; shapes are still checked.
  static StochKernel unchecked(Object domain, Object codomain, std::vector<double> table);

  const Object& domain() const noexcept { return domain_; }
  const Object& codomain() const noexcept { return codomain_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t y, std::size_t a) const { return table_[a * rows_ + y]; }
  const std::vector<double>& table() const noexcept { return table_; }
  bool is_state() const noexcept { return domain_.empty(); }

 private:
  Object domain_, codomain_;
  std::size_t rows_ = 1, cols_ = 1;
  std::vector<double> table_{1.0};
};

StochKernel identity(const Object& x);
StochKernel copy(const Object& x);
StochKernel del(const Object& x);
StochKernel swap(const Object& x, const Object& y);

// f ∘ p, i.e. first p then f.
StochKernel compose(const StochKernel& f, const StochKernel& p);
StochKernel tensor(const StochKernel& f, const StochKernel& g);

// Codomain factors picked by position; repeats copy, omissions marginalize.
StochKernel select(const StochKernel& f, std::span<const std::size_t> positions);

// s: A -> L, g: K -> O where K lines up with the L-factors at `inputs`.
// Returns A -> L ⊗ O with (l, o | a) = s(l | a) g(o | l[inputs]).
StochKernel extend(const StochKernel& s, std::span<const std::size_t> inputs, const StochKernel& g);

// For f: A -> Y, the conditional f_|X : X ⊗ A -> R where X are the codomain
// factors at `x` (in that order) and R the remaining ones in codomain order.
// Uniform on conditioning values of zero probability.
StochKernel conditional(const StochKernel& f, std::span<const std::size_t> x);

// Treat the domain as drawn uniformly: A -> Y becomes the state A ⊗ Y.
StochKernel with_uniform_prior(const StochKernel& f);

// f(x,y,z) f(z) = f(x,z) f(y,z) everywhere, after marginalizing the factors
// outside x, y, z. Throws Error when f has a nontrivial domain.
bool ci_state(const StochKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
              std::span<const std::size_t> z, double tol = kDefaultTol);

// Some k(x|z) has f(x,y,z|a) = k(x|z) f(y,z|a) for all a. Asymmetric in x
// and y: only the y side may depend on the input.
bool ci_kernel(const StochKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
               std::span<const std::size_t> z, double tol = kDefaultTol);

// The kernel k(out | in) between codomain factors, read off a uniform-prior
// joint. When out is independent of the input given in, this is the factor
// any compatible interpretation must assign.
StochKernel factor_kernel(const StochKernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out);

// Largest absolute entry difference; throws DimensionError on other shapes.
double max_abs_diff(const StochKernel& a, const StochKernel& b);

// Same kernel with its factors renamed; sizes must match the existing factors.
StochKernel rename_factors(const StochKernel& f, const std::vector<std::string>& domain,
                        const std::vector<std::string>& codomain);

}  // namespace mdsep::finstoch
