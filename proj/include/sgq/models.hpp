// Parametric models: affine diffusion in 1D and a scalar holomorphic map.
#pragma once

#include "sgq/index_set.hpp"
#include "sgq/jacobi.hpp"
#include "sgq/multi_index.hpp"
#include "sgq/spatial.hpp"
#include "sgq/sparse.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sgq {

/// -(a(y) u')' = f on (0, 1), u(0) = u(1) = 0, with
/// a(y)(x) = abar + sum_{j <= active} y_j psi_j(x),
/// psi_j(x) = amplitude j^-decay sin(j pi x). abar and f are constants.
struct AffineDiffusion {
  double abar = 1.0;
  double amplitude = 0.0;
  double decay = 2.0;
  std::size_t active = 16;
  double load = 1.0;

  /// Amplitude chosen so that sum over all j >= 1 of amplitude j^-decay
  /// equals `total` (requires decay > 1).
  static AffineDiffusion with_total(double total, double decay = 2.0, std::size_t active = 16);
  /// abar 1, total 0.9, decay 2, 16 active parameters, f = 1.
  static AffineDiffusion defaults() { return with_total(0.9); }

  double psi(std::size_t j, double x) const;
  double coefficient(std::span<const double> y, double x) const;
  /// Lower bound abar - sum_{j <= active} amplitude j^-decay for a(y).
  double a_min() const;
  /// sum_{j > active} amplitude j^-decay, the amplitude of the dropped tail.
  double tail_bound() const;
  /// ||f||_{V*} / a_min; for constant f, ||f||_{V*} = |f| / sqrt(12) in the
  /// H^1 seminorm.
  double solution_bound() const;
  /// Throws std::invalid_argument unless a_min() > 0, abar > 0, decay > 1.
  void validate() const;
};

/// Galerkin solution at level k for the parameter y.
std::vector<double> pde_sample(const AffineDiffusion& m, std::span<const double> y, unsigned level);
Sampler pde_sampler(const AffineDiffusion& m);

/// u(y) = 1 / (c0 - sum_{j <= active} y_j b_j), b_j = amplitude j^-decay.
struct HolomorphicModel {
  double c0 = 2.0;
  double amplitude = 0.6;
  double decay = 2.0;
  std::size_t active = 4;

  double b(std::size_t j) const;
  /// r = c0 - sum_j b_j, the distance of the denominator from zero.
  double margin() const;
  /// Throws std::invalid_argument unless margin() > 0.
  void validate() const;
};

double holo_sample(const HolomorphicModel& m, std::span<const double> y);
/// Scalar sampler; the level argument is ignored (X = R).
Sampler holo_sampler(const HolomorphicModel& m);

/// Visits the points and weights of the full tensor Gauss-Jacobi rule with n
/// nodes in each of the first `active` dimensions. Throws
/// std::invalid_argument if n^active exceeds 10^7.
void tensor_gauss(const ParamSequence& params, std::size_t active, unsigned n,
                  const std::function<void(std::span<const double> y, double w)>& visit);

/// v_nu = integral of v(y) J_nu(y) d mu over the active dimensions by full
/// tensor Gauss-Jacobi quadrature of order n, v sampled at `level`.
std::vector<double> gpc_coefficient_oracle(const Sampler& v, const MultiIndex& nu, unsigned level,
                                           const ParamSequence& params, std::size_t active, unsigned n);

/// Smallest C with 2 (1 + lambda0 k)^theta0 log(2k+3) <= (C k + 1)^(theta0+eps)
/// for 1 <= k <= kmax.
double fit_c_epsilon(double theta0, double lambda0, double eps, unsigned kmax = 1000);

/// theta0 = max(sup a_j, sup b_j, -1/2) + 1/2 over the listed dimensions and
/// the fallback.
double theta_zero(const ParamSequence& params);

struct PWeightDefaults {
  double theta = 0.0;
  double lambda = 0.0;
};
/// theta = theta0 + 1 + eps, lambda = C_eps + 1.
PWeightDefaults default_p_weight(const ParamSequence& params, double eps = 0.1);

/// Throws std::invalid_argument unless (rho_j^-1) is in l_q. Truncated
/// sequences (finitely many active entries) always pass.
void validate_summability(const RhoSequence& rho, double q);

struct WeightRecipe {
  WeightFamily sigma1;
  WeightFamily sigma2;
  double q1 = 1.0;
  double q2 = 1.0;

  ThresholdConfig config(SetVariant variant, double alpha) const;
};

/// sigma_{i;nu} = rho_i^nu prod_j c_{nu_j}^{a_j,b_j}, i = 1, 2, with
/// rho_{i;j} = scale_i j^exponent_i. The defaults keep rho_1 inside the
/// ellipticity margin of the default model and track the measured decay of
/// its coefficients (about 3.8 j^2 per order) with rho_2.
struct PdeRecipeParams {
  double rho1_scale = 1.1;
  double rho1_exponent = 0.5;
  double rho2_scale = 3.0;
  double rho2_exponent = 2.0;
  double q1 = 0.5;
  double q2 = 0.6;
  /// Restrict both sequences to the model's active dimensions.
  bool truncate = true;
  SetVariant variant = SetVariant::kFull;
};

/// Checks sup_x sum_j rho_{1;j} |psi_j(x)| / abar < 1, rho_{1;j} > 1,
/// summability and the q1 cap of the variant.
WeightRecipe build_weight_recipe(const AffineDiffusion& m, const PdeRecipeParams& r, const ParamSequence& params);

/// sigma_nu = a_nu^(p/(2 kappa) - 1) p_nu(theta, lambda) with the proxy
/// a_nu = prod_j rho_j^-nu_j and q = 2p / (2 - p/kappa). The poly-ellipse
/// radii satisfy sum_j b_j (rho_j - 1) = share * r with
/// rho_j - 1 proportional to b_j^(share_exponent - 1).
struct HoloRecipeParams {
  double p = 1.0;
  unsigned kappa = 1;
  double theta = 1.6;
  double lambda = 2.0;
  double share = 1.0;
  double share_exponent = 0.0;
};

/// Per-dimension radii rho_j for the holomorphic recipe.
std::vector<double> admissible_radii(const HolomorphicModel& m, double share, double share_exponent);

WeightRecipe build_weight_recipe(const HolomorphicModel& m, const HoloRecipeParams& r);

}  // namespace sgq
