// Univariate Lagrange interpolation on Chebyshev nodes and its increments.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sgq {

/// The m+1 Chebyshev nodes y_{m,k} = -cos((2k+1) pi / (2(m+1))), increasing.
struct NodeSet {
  unsigned m = 0;
  std::vector<double> nodes;
};

/// Nodes are computed as sin(pi (2k-m) / (2(m+1))), which is exactly
/// antisymmetric and puts an exact 0 in the middle for even m.
NodeSet chebyshev_nodes(unsigned m);

/// Barycentric weights 1 / prod_{j != k} (x_k - x_j), rescaled so the largest
/// magnitude is one. Computed in log space to avoid under/overflow.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// Lagrange basis L_{m,0..m} on Y_m, evaluated in barycentric form.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(unsigned m);

  unsigned order() const { return m_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Writes L_{m,k}(y) for k = 0..m. At a node the output is the exact unit
  /// vector.
  void eval(double y, std::span<double> out) const;
  std::vector<double> eval(double y) const;

 private:
  unsigned m_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared, lazily built basis for order m. Thread-safe; the reference stays
/// valid for the lifetime of the program.
const LagrangeBasis& lagrange_basis(unsigned m);

/// I_m(v) given by its values at Y_m.
class UnivariatePoly {
 public:
  explicit UnivariatePoly(std::vector<double> samples);

  unsigned order() const { return basis_->order(); }
  const std::vector<double>& samples() const { return samples_; }
  double operator()(double y) const;

 private:
  const LagrangeBasis* basis_;
  std::vector<double> samples_;
};

/// I_m(v) from the samples v(y_{m,k}); m = samples.size() - 1.
UnivariatePoly interpolate(std::vector<double> samples);
/// I_m(v) sampling v at Y_m.
UnivariatePoly interpolate(unsigned m, const std::function<double(double)>& v);

/// (I_m - I_{m-1})(v)(y), or (I_m - I_{m-2})(v)(y) when `even`, with
/// I_{-1} = I_{-2} = 0. Throws std::invalid_argument for odd m when `even`.
double increment_apply(unsigned m, const std::function<double(double)>& v, double y, bool even);

/// max of sum_k |L_{m,k}(y)| over 4096 equispaced points of [-1, 1]
/// (endpoints included).
double lebesgue_estimate(unsigned m);

}  // namespace sgq
