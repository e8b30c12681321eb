#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mdsep::gauss {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultTol = 1e-9;

// One tensor factor: a real vector space of the given dimension.
struct Factor {
  std::string name;
  std::size_t dim = 1;

  std::size_t size() const noexcept { return dim; }
  friend bool operator==(const Factor&, const Factor&) = default;
};

using Object = std::vector<Factor>;

std::size_t dimension(const Object& o);
bool same_shape(const Object& a, const Object& b);

// x |-> N(A x + b, S); moments only, S may be singular.
class GaussKernel {
 public:
  GaussKernel();
  // Throws DimensionError on shape mismatch and Error when S is not
  // symmetric (1e-12) or has an eigenvalue below -1e-10.
  GaussKernel(Object domain, Object codomain, Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::MatrixXd s);

  static GaussKernel unchecked(Object domain, Object codomain, Eigen::MatrixXd a, Eigen::VectorXd b,
                               Eigen::MatrixXd s);

  const Object& domain() const noexcept { return domain_; }
  const Object& codomain() const noexcept { return codomain_; }
  std::size_t in_dim() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  std::size_t out_dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }
  const Eigen::MatrixXd& s() const noexcept { return s_; }
  bool is_state() const noexcept { return domain_.empty(); }

 private:
  Object domain_, codomain_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd s_;
};

// Moore-Penrose pseudoinverse of a symmetric PSD matrix.
Eigen::MatrixXd psd_pinv(const Eigen::MatrixXd& m);

GaussKernel identity(const Object& x);
GaussKernel copy(const Object& x);
GaussKernel del(const Object& x);
GaussKernel swap(const Object& x, const Object& y);

// g ∘ f
GaussKernel compose(const GaussKernel& g, const GaussKernel& f);
GaussKernel tensor(const GaussKernel& f, const GaussKernel& g);

GaussKernel select(const GaussKernel& f, std::span<const std::size_t> positions);
GaussKernel extend(const GaussKernel& s, std::span<const std::size_t> inputs, const GaussKernel& g);

// Domain X ⊗ A, codomain the factors outside x.
GaussKernel conditional(const GaussKernel& f, std::span<const std::size_t> x);

// Draws the input from N(0, I): A -> Y becomes the state A ⊗ Y.
GaussKernel with_standard_prior(const GaussKernel& f);

// Σ_XY = Σ_XZ Σ_ZZ⁺ Σ_ZY within tol. Throws Error on a nontrivial domain.
bool ci_state(const GaussKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
              std::span<const std::size_t> z, double tol = kDefaultTol);

// The input is given a standard normal prior and joins the y side.
bool ci_kernel(const GaussKernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
               std::span<const std::size_t> z, double tol = kDefaultTol);

GaussKernel factor_kernel(const GaussKernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out);

// Largest absolute difference over A, b and S.
double max_abs_diff(const GaussKernel& x, const GaussKernel& y);

// Same kernel with its factors renamed; sizes must match the existing factors.
GaussKernel rename_factors(const GaussKernel& f, const std::vector<std::string>& domain,
                        const std::vector<std::string>& codomain);

}  // namespace mdsep::gauss
