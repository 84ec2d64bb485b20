#include "sgq/quad1d.hpp"

#include "sgq/interp1d.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace sgq {

namespace {

QuadRule build_rule(const JacobiParam& p, unsigned m) {
  p.validate();
  const LagrangeBasis& basis = lagrange_basis(m);
  // Each L_{m,k} has degree m; ceil((m+1)/2) nodes suffice, two more for margin.
  const GaussRule g = gauss_jacobi_rule(p, (m + 2) / 2 + 2);
  QuadRule rule;
  rule.param = p;
  rule.m = m;
  rule.nodes = basis.nodes();
  rule.weights.assign(m + 1, 0.0);
  std::vector<double> l(m + 1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    basis.eval(g.nodes[i], l);
    for (unsigned k = 0; k <= m; ++k) rule.weights[k] += g.weights[i] * l[k];
  }
  if (p.symmetric()) {
    for (unsigned k = 0; k < (m + 1) / 2; ++k) {
      const double avg = 0.5 * (rule.weights[k] + rule.weights[m - k]);
      rule.weights[k] = rule.weights[m - k] = avg;
    }
  }
  return rule;
}

}  // namespace

const QuadRule& interpolatory_weights(const JacobiParam& p, unsigned m) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, unsigned>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{p.a, p.b, m}];
  if (!slot) slot = std::make_unique<QuadRule>(build_rule(p, m));
  return *slot;
}

SignedRule increment_weights(const JacobiParam& p, unsigned m) {
  if (m % 2 != 0) throw std::invalid_argument("increment_weights: m must be even");
  const QuadRule& hi = interpolatory_weights(p, m);
  SignedRule out;
  out.nodes = hi.nodes;
  out.weights = hi.weights;
  if (m >= 2) {
    const QuadRule& lo = interpolatory_weights(p, m - 2);
    for (std::size_t k = 0; k < lo.nodes.size(); ++k) {
      bool merged = false;
      for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        if (out.nodes[i] == lo.nodes[k]) {
          out.weights[i] -= lo.weights[k];
          merged = true;
          break;
        }
      }
      if (!merged) {
        out.nodes.push_back(lo.nodes[k]);
        out.weights.push_back(-lo.weights[k]);
      }
    }
  }
  return out;
}

double odd_moment(const JacobiParam& p, unsigned k) {
  if (!p.symmetric()) throw std::invalid_argument("odd_moment: requires a == b");
  if (k % 2 == 0) throw std::invalid_argument("odd_moment: requires odd k");
  const GaussRule g = gauss_jacobi_rule(p, k / 2 + 2);
  const JacobiBasis basis(p, k);
  return g.integrate([&](double y) { return basis.eval(k, y); });
}

}  // namespace sgq
