// Univariate Jacobi probability measures, their orthonormal polynomials and
// Gauss-Jacobi reference quadrature.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sgq {

/// Exponents of the Jacobi probability measure
/// c_{a,b} (1-y)^a (1+y)^b dy on (-1, 1).
struct JacobiParam {
  double a = 0.0;
  double b = 0.0;

  /// Throws std::domain_error unless a > -1 and b > -1.
  void validate() const;
  bool symmetric() const { return a == b; }

  friend bool operator==(const JacobiParam&, const JacobiParam&) = default;
};

/// Per-dimension exponents (a_j, b_j). Dimensions are 1-based; every
/// dimension past the explicitly listed ones uses the fallback pair.
class ParamSequence {
 public:
  ParamSequence() = default;
  explicit ParamSequence(JacobiParam fallback);
  ParamSequence(std::vector<JacobiParam> leading, JacobiParam fallback);

  const JacobiParam& at(std::size_t dim) const;
  std::size_t explicit_count() const { return leading_.size(); }
  const std::vector<JacobiParam>& leading() const { return leading_; }
  const JacobiParam& fallback() const { return fallback_; }

  /// True iff a_j == b_j for every dimension (ultra-spherical product measure).
  bool symmetric() const;

 private:
  std::vector<JacobiParam> leading_;
  JacobiParam fallback_{};
};

/// Density c_{a,b} (1-y)^a (1+y)^b of the Jacobi probability measure.
/// Throws std::domain_error for y outside (-1, 1).
double weight_density(const JacobiParam& p, double y);

/// log c_k^{a,b}, the factor relating the classical Jacobi polynomial
/// P_k^{(a,b)} to its mu_{a,b}-orthonormal version. log c_0 = 0.
double log_normalization_constant(const JacobiParam& p, unsigned k);
double normalization_constant(const JacobiParam& p, unsigned k);

/// Three-term recurrence coefficients of the monic Jacobi polynomials with
/// respect to the probability measure: alpha[k] for k = 0..n-1 and
/// beta[k] for k = 0..n-1 (beta[0] = 1, the total mass).
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
};

Recurrence jacobi_recurrence(const JacobiParam& p, unsigned n);

/// Orthonormal Jacobi polynomials J_0..J_max for one parameter pair.
/// Immutable after construction and safe to share across threads.
class JacobiBasis {
 public:
  JacobiBasis(JacobiParam p, unsigned max_order);

  const JacobiParam& param() const { return param_; }
  unsigned max_order() const { return max_order_; }

  double eval(unsigned k, double y) const;
  /// Writes J_0(y), ..., J_{out.size()-1}(y).
  void eval_all(double y, std::span<double> out) const;
  /// J_k(y) and J_k'(y).
  std::pair<double, double> eval_with_derivative(unsigned k, double y) const;

 private:
  JacobiParam param_;
  unsigned max_order_;
  std::vector<double> alpha_;
  std::vector<double> sqrt_beta_;  // sqrt_beta_[k] = sqrt(beta_k), k >= 1
};

/// Value of the orthonormal polynomial J_k at y in [-1, 1].
double eval_orthonormal(const JacobiParam& p, unsigned k, double y);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// n-point Gauss-Jacobi rule for mu_{a,b}: Golub-Welsch eigenvalues polished
/// by Newton steps, weights from the Christoffel function. Exact for degree
/// <= 2n-1; weights sum to one.
GaussRule gauss_jacobi_rule(const JacobiParam& p, unsigned n);

/// max |J_k| over 4096 Chebyshev-distributed points and the endpoints.
double empirical_sup_norm(const JacobiParam& p, unsigned k);

/// Smallest lambda >= 0 with empirical_sup_norm(k) <= (1 + lambda k)^gamma
/// for all k <= max_order, gamma = max(a, b, -1/2) + 1/2. Returns +inf when
/// gamma == 0 and some sup-norm exceeds one (no lambda can work).
double fit_sup_norm_lambda(const JacobiParam& p, unsigned max_order);

}  // namespace sgq
