#include "sgq/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sgq {

void JacobiParam::validate() const {
  if (!(a > -1.0) || !(b > -1.0)) {
    std::ostringstream os;
    os << "Jacobi exponents must exceed -1, got a=" << a << " b=" << b;
    throw std::domain_error(os.str());
  }
}

ParamSequence::ParamSequence(JacobiParam fallback) : fallback_(fallback) {
  fallback_.validate();
}

ParamSequence::ParamSequence(std::vector<JacobiParam> leading, JacobiParam fallback)
    : leading_(std::move(leading)), fallback_(fallback) {
  for (const auto& p : leading_) p.validate();
  fallback_.validate();
}

const JacobiParam& ParamSequence::at(std::size_t dim) const {
  if (dim == 0) throw std::out_of_range("dimensions are 1-based");
  return dim <= leading_.size() ? leading_[dim - 1] : fallback_;
}

bool ParamSequence::symmetric() const {
  return fallback_.symmetric() &&
         std::all_of(leading_.begin(), leading_.end(),
                     [](const JacobiParam& p) { return p.symmetric(); });
}

namespace {

double log_measure_constant(const JacobiParam& p) {
  return std::lgamma(p.a + p.b + 2.0) - (p.a + p.b + 1.0) * std::numbers::ln2 -
         std::lgamma(p.a + 1.0) - std::lgamma(p.b + 1.0);
}

double monic_alpha(const JacobiParam& p, unsigned k) {
  const double a = p.a, b = p.b;
  if (k == 0) return (b - a) / (a + b + 2.0);
  const double s = 2.0 * k + a + b;
  return (b * b - a * a) / (s * (s + 2.0));
}

double monic_beta(const JacobiParam& p, unsigned k) {
  const double a = p.a, b = p.b;
  if (k == 0) return 1.0;
  if (k == 1) {
    const double s = 2.0 + a + b;
    return 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
  }
  const double kk = k;
  const double s = 2.0 * kk + a + b;
  return 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0));
}

}  // namespace

double weight_density(const JacobiParam& p, double y) {
  p.validate();
  if (!(y > -1.0 && y < 1.0)) throw std::domain_error("weight_density: y must lie in (-1, 1)");
  return std::exp(log_measure_constant(p) + p.a * std::log1p(-y) + p.b * std::log1p(y));
}

double log_normalization_constant(const JacobiParam& p, unsigned k) {
  p.validate();
  if (k == 0) return 0.0;
  const double a = p.a, b = p.b, kk = k;
  const double num = std::log(2.0 * kk + a + b + 1.0) + std::lgamma(kk + 1.0) +
                     std::lgamma(kk + a + b + 1.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0);
  const double den = std::lgamma(kk + a + 1.0) + std::lgamma(kk + b + 1.0) + std::lgamma(a + b + 2.0);
  return 0.5 * (num - den);
}

double normalization_constant(const JacobiParam& p, unsigned k) {
  return std::exp(log_normalization_constant(p, k));
}

Recurrence jacobi_recurrence(const JacobiParam& p, unsigned n) {
  p.validate();
  Recurrence r;
  r.alpha.resize(n);
  r.beta.resize(n);
  for (unsigned k = 0; k < n; ++k) {
    r.alpha[k] = monic_alpha(p, k);
    r.beta[k] = monic_beta(p, k);
  }
  return r;
}

JacobiBasis::JacobiBasis(JacobiParam p, unsigned max_order) : param_(p), max_order_(max_order) {
  p.validate();
  alpha_.resize(max_order + 1);
  sqrt_beta_.resize(max_order + 2);
  for (unsigned k = 0; k <= max_order; ++k) alpha_[k] = monic_alpha(p, k);
  sqrt_beta_[0] = 1.0;
  for (unsigned k = 1; k <= max_order + 1; ++k) sqrt_beta_[k] = std::sqrt(monic_beta(p, k));
}

double JacobiBasis::eval(unsigned k, double y) const {
  if (k > max_order_) throw std::out_of_range("JacobiBasis::eval: order exceeds table");
  double prev = 0.0, cur = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    const double next = ((y - alpha_[i]) * cur - sqrt_beta_[i] * prev) / sqrt_beta_[i + 1];
    prev = cur;
    cur = next;
  }
  return cur;
}

void JacobiBasis::eval_all(double y, std::span<double> out) const {
  if (out.empty()) return;
  if (out.size() > max_order_ + 1) throw std::out_of_range("JacobiBasis::eval_all: order exceeds table");
  out[0] = 1.0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    out[i + 1] = ((y - alpha_[i]) * out[i] - sqrt_beta_[i] * prev) / sqrt_beta_[i + 1];
    prev = out[i];
  }
}

std::pair<double, double> JacobiBasis::eval_with_derivative(unsigned k, double y) const {
  if (k > max_order_) throw std::out_of_range("JacobiBasis: order exceeds table");
  double prev = 0.0, cur = 1.0, dprev = 0.0, dcur = 0.0;
  for (unsigned i = 0; i < k; ++i) {
    const double next = ((y - alpha_[i]) * cur - sqrt_beta_[i] * prev) / sqrt_beta_[i + 1];
    const double dnext = (cur + (y - alpha_[i]) * dcur - sqrt_beta_[i] * dprev) / sqrt_beta_[i + 1];
    prev = cur;
    cur = next;
    dprev = dcur;
    dcur = dnext;
  }
  return {cur, dcur};
}

double eval_orthonormal(const JacobiParam& p, unsigned k, double y) {
  return JacobiBasis(p, k).eval(k, y);
}

GaussRule gauss_jacobi_rule(const JacobiParam& p, unsigned n) {
  p.validate();
  if (n == 0) throw std::invalid_argument("gauss_jacobi_rule: need at least one node");

  const Recurrence rec = jacobi_recurrence(p, n);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (unsigned k = 0; k < n; ++k) diag[k] = rec.alpha[k];
  for (unsigned k = 1; k < n; ++k) sub[k - 1] = std::sqrt(rec.beta[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "gauss_jacobi_rule: eigen solve failed for a=" << p.a << " b=" << p.b << " n=" << n;
    throw std::runtime_error(os.str());
  }

  const JacobiBasis basis(p, n);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> values(n);
  for (unsigned i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      const auto [f, df] = basis.eval_with_derivative(n, x);
      if (df == 0.0 || !std::isfinite(f / df)) break;
      const double step = f / df;
      if (std::abs(step) > 1e-6) break;  // eigenvalue already accurate; refuse wild steps
      x -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    }
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os << "gauss_jacobi_rule: node polishing diverged for a=" << p.a << " b=" << p.b << " n=" << n;
      throw std::runtime_error(os.str());
    }
    rule.nodes[i] = x;
    basis.eval_all(x, values);
    double s = 0.0;
    for (double v : values) s += v * v;
    rule.weights[i] = 1.0 / s;
  }

  if (p.symmetric()) {
    for (unsigned i = 0; i < n / 2; ++i) {
      const unsigned j = n - 1 - i;
      const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

double empirical_sup_norm(const JacobiParam& p, unsigned k) {
  const JacobiBasis basis(p, k);
  constexpr int kGrid = 4096;
  double best = std::max(std::abs(basis.eval(k, -1.0)), std::abs(basis.eval(k, 1.0)));
  for (int i = 0; i < kGrid; ++i) {
    const double y = std::cos(std::numbers::pi * (i + 0.5) / kGrid);
    best = std::max(best, std::abs(basis.eval(k, y)));
  }
  return best;
}

double fit_sup_norm_lambda(const JacobiParam& p, unsigned max_order) {
  const double gamma = std::max({p.a, p.b, -0.5}) + 0.5;
  double lambda = 0.0;
  for (unsigned k = 1; k <= max_order; ++k) {
    const double s = empirical_sup_norm(p, k);
    if (gamma == 0.0) {
      if (s > 1.0 + 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    lambda = std::max(lambda, (std::pow(s, 1.0 / gamma) - 1.0) / k);
  }
  return lambda;
}

}  // namespace sgq
