// Nested spatial approximation spaces V_{2^k} and their dyadic details.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sgq {

/// Contract for a hierarchy of nested spaces V_{2^k}, k = 0, 1, ...
/// Coefficient vectors at level k have length dim(k).
class SpatialHierarchy {
 public:
  virtual ~SpatialHierarchy() = default;

  /// dim V_{2^k}; never exceeds 2^k.
  virtual std::size_t dim(unsigned level) const = 0;
  /// Embeds level-`from` coefficients into level `to` >= from.
  virtual std::vector<double> prolong(std::span<const double> coeffs, unsigned from, unsigned to) const = 0;
  /// The X^1 norm of a level-k element.
  virtual double norm(std::span<const double> coeffs, unsigned level) const = 0;
  /// Pairing of a level-k element with a functional given by its
  /// coefficient vector at the same level.
  virtual double pair(std::span<const double> functional, std::span<const double> coeffs) const;
  virtual std::string name() const = 0;
};

/// The scalar space X = R: V_{2^k} = R for every k >= 0, P_m = identity for
/// m >= 1, so every detail past level zero vanishes.
class ScalarHierarchy final : public SpatialHierarchy {
 public:
  std::size_t dim(unsigned) const override { return 1; }
  std::vector<double> prolong(std::span<const double> coeffs, unsigned from, unsigned to) const override;
  double norm(std::span<const double> coeffs, unsigned level) const override;
  std::string name() const override { return "scalar"; }
};

/// Piecewise-linear finite elements on (0, 1) with homogeneous Dirichlet
/// ends. Level k has interior nodes x_i = i 2^-k, i = 1..2^k-1, so
/// dim V_{2^k} = 2^k - 1 and V_1 = {0}. The X^1 norm is the H^1 seminorm.
class Fem1D final : public SpatialHierarchy {
 public:
  using Function = std::function<double(double)>;

  struct Norms {
    double l2 = 0.0;
    double h1 = 0.0;  // seminorm
  };

  static std::size_t dofs(unsigned level);
  static double mesh_size(unsigned level);
  static std::vector<double> nodes(unsigned level);

  std::size_t dim(unsigned level) const override { return dofs(level); }
  std::vector<double> prolong(std::span<const double> coeffs, unsigned from, unsigned to) const override;
  double norm(std::span<const double> coeffs, unsigned level) const override;
  std::string name() const override { return "fem1d"; }

  /// Nodal interpolation P_{2^k} w; w must vanish at the endpoints.
  std::vector<double> project(unsigned level, const Function& w) const;
  /// Galerkin solution of -(a u')' = f, u(0) = u(1) = 0, with the
  /// coefficient and load sampled at element midpoints. Throws
  /// std::runtime_error if the system is not positive definite.
  std::vector<double> solve(unsigned level, const Function& a, const Function& f) const;
  /// Same, with the coefficient given per element (2^k values).
  std::vector<double> solve_elementwise(unsigned level, std::span<const double> a_elem,
                                        std::span<const double> f_elem) const;
  /// Injection of nodal values onto a coarser level.
  std::vector<double> restrict_nodal(std::span<const double> coeffs, unsigned from, unsigned to) const;

  /// Exact L2 and H1-seminorm of a piecewise-linear function.
  Norms norms(std::span<const double> coeffs, unsigned level) const;
  /// || w' - u_h' ||_{L2} by 5-point Gauss-Legendre per element.
  double h1_error(std::span<const double> coeffs, unsigned level, const Function& dw) const;
  double l2_error(std::span<const double> coeffs, unsigned level, const Function& w) const;
};

/// Produces the coefficient vector of P_{2^k} w (or a surrogate for it) at
/// the requested level.
using LevelSampler = std::function<std::vector<double>(unsigned level)>;

/// delta_0 = P_1 w, delta_k = P_{2^k} w - P_{2^{k-1}} w (coarse part
/// prolonged) for k >= 1. Returned at level k.
std::vector<double> detail(const SpatialHierarchy& h, unsigned level, const LevelSampler& sampler);

/// Least-squares slope of log(errors) against log(m).
double fitted_slope(std::span<const double> m, std::span<const double> errors);

}  // namespace sgq
