// Interpolatory quadrature on Chebyshev nodes against Jacobi measures.
#pragma once

#include "sgq/jacobi.hpp"

#include <vector>

namespace sgq {

/// Q_m: weights omega_{m,k} = integral of L_{m,k} against mu_{a,b}.
/// Weights can be negative for general (a, b).
struct QuadRule {
  JacobiParam param;
  unsigned m = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

/// Built once per (a, b, m) and cached; thread-safe.
const QuadRule& interpolatory_weights(const JacobiParam& p, unsigned m);

/// A signed rule on a merged node set.
struct SignedRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

/// Delta^Q_m = Q_m - Q_{m-2} (Q_{-2} = 0) on the union of Y_m and Y_{m-2};
/// the shared node 0 is merged. Throws std::invalid_argument for odd m.
SignedRule increment_weights(const JacobiParam& p, unsigned m);

/// integral of J_k against mu_{a,a} by Gauss-Jacobi quadrature. Throws
/// std::invalid_argument unless a == b and k is odd.
double odd_moment(const JacobiParam& p, unsigned k);

}  // namespace sgq
