#include "sgq/interp1d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sgq {

NodeSet chebyshev_nodes(unsigned m) {
  NodeSet s;
  s.m = m;
  s.nodes.resize(m + 1);
  const double denom = 2.0 * (m + 1.0);
  for (unsigned k = 0; k <= m; ++k) {
    const int num = 2 * static_cast<int>(k) - static_cast<int>(m);
    if (num == 0) {
      s.nodes[k] = 0.0;
    } else if (num < 0) {
      // mirror the positive half so the set is exactly symmetric
      s.nodes[k] = -std::sin(std::numbers::pi * (-num) / denom);
    } else {
      s.nodes[k] = std::sin(std::numbers::pi * num / denom);
    }
  }
  return s;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> logs(n, 0.0);
  std::vector<int> signs(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = nodes[k] - nodes[j];
      if (d == 0.0) throw std::invalid_argument("barycentric_weights: repeated node");
      logs[k] -= std::log(std::abs(d));
      if (d < 0) signs[k] = -signs[k];
    }
  }
  const double top = n ? *std::max_element(logs.begin(), logs.end()) : 0.0;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = signs[k] * std::exp(logs[k] - top);
  return w;
}

LagrangeBasis::LagrangeBasis(unsigned m) : m_(m) {
  nodes_ = chebyshev_nodes(m).nodes;
  weights_ = barycentric_weights(nodes_);
}

void LagrangeBasis::eval(double y, std::span<double> out) const {
  if (out.size() != nodes_.size()) throw std::invalid_argument("LagrangeBasis::eval: output size mismatch");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (y == nodes_[k]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[k] = 1.0;
      return;
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    out[k] = weights_[k] / (y - nodes_[k]);
    total += out[k];
  }
  for (double& v : out) v /= total;
}

std::vector<double> LagrangeBasis::eval(double y) const {
  std::vector<double> out(nodes_.size());
  eval(y, out);
  return out;
}

const LagrangeBasis& lagrange_basis(unsigned m) {
  static std::mutex mu;
  static std::deque<std::unique_ptr<LagrangeBasis>> cache;
  std::lock_guard lock(mu);
  while (cache.size() <= m) cache.push_back(nullptr);
  if (!cache[m]) cache[m] = std::make_unique<LagrangeBasis>(m);
  return *cache[m];
}

UnivariatePoly::UnivariatePoly(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("UnivariatePoly: need at least one sample");
  basis_ = &lagrange_basis(static_cast<unsigned>(samples_.size() - 1));
}

double UnivariatePoly::operator()(double y) const {
  std::vector<double> l = basis_->eval(y);
  double s = 0.0;
  for (std::size_t k = 0; k < l.size(); ++k) s += l[k] * samples_[k];
  return s;
}

UnivariatePoly interpolate(std::vector<double> samples) { return UnivariatePoly(std::move(samples)); }

UnivariatePoly interpolate(unsigned m, const std::function<double(double)>& v) {
  const auto& nodes = lagrange_basis(m).nodes();
  std::vector<double> s(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) s[k] = v(nodes[k]);
  return UnivariatePoly(std::move(s));
}

double increment_apply(unsigned m, const std::function<double(double)>& v, double y, bool even) {
  if (even && m % 2 != 0) throw std::invalid_argument("increment_apply: even increment needs even m");
  const unsigned step = even ? 2 : 1;
  double out = interpolate(m, v)(y);
  if (m >= step) out -= interpolate(m - step, v)(y);
  return out;
}

double lebesgue_estimate(unsigned m) {
  const LagrangeBasis& basis = lagrange_basis(m);
  constexpr int kPoints = 4096;
  std::vector<double> l(basis.size());
  double best = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double y = -1.0 + 2.0 * i / (kPoints - 1);
    basis.eval(y, l);
    double s = 0.0;
    for (double v : l) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace sgq
