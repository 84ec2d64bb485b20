#include "sgq/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sgq {

// ---------------------------------------------------------------------------
// Affine diffusion

AffineDiffusion AffineDiffusion::with_total(double total, double decay, std::size_t active) {
  if (!(decay > 1.0)) throw std::invalid_argument("AffineDiffusion: decay must exceed 1");
  AffineDiffusion m;
  m.decay = decay;
  m.active = active;
  m.amplitude = total / std::riemann_zeta(decay);
  return m;
}

double AffineDiffusion::psi(std::size_t j, double x) const {
  return amplitude * std::pow(static_cast<double>(j), -decay) * std::sin(std::numbers::pi * j * x);
}

double AffineDiffusion::coefficient(std::span<const double> y, double x) const {
  double a = abar;
  const std::size_t n = std::min(y.size(), active);
  for (std::size_t j = 1; j <= n; ++j)
    if (y[j - 1] != 0.0) a += y[j - 1] * psi(j, x);
  return a;
}

double AffineDiffusion::a_min() const {
  double s = 0.0;
  for (std::size_t j = 1; j <= active; ++j) s += std::pow(static_cast<double>(j), -decay);
  return abar - std::abs(amplitude) * s;
}

double AffineDiffusion::tail_bound() const {
  double s = 0.0;
  for (std::size_t j = 1; j <= active; ++j) s += std::pow(static_cast<double>(j), -decay);
  return std::abs(amplitude) * (std::riemann_zeta(decay) - s);
}

double AffineDiffusion::solution_bound() const { return std::abs(load) / std::sqrt(12.0) / a_min(); }

void AffineDiffusion::validate() const {
  if (!(abar > 0.0)) throw std::invalid_argument("AffineDiffusion: abar must be positive");
  if (!(decay > 1.0)) throw std::invalid_argument("AffineDiffusion: decay must exceed 1");
  if (!(a_min() > 0.0)) {
    std::ostringstream os;
    os << "AffineDiffusion: not uniformly elliptic (a_min = " << a_min() << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<double> pde_sample(const AffineDiffusion& m, std::span<const double> y, unsigned level) {
  const std::size_t elems = std::size_t{1} << level;
  const double h = Fem1D::mesh_size(level);
  std::vector<double> a(elems, m.abar), f(elems, m.load);
  const std::size_t n = std::min(y.size(), m.active);
  for (std::size_t j = 1; j <= n; ++j) {
    const double yj = y[j - 1];
    if (yj == 0.0) continue;
    const double c = yj * m.amplitude * std::pow(static_cast<double>(j), -m.decay);
    for (std::size_t e = 0; e < elems; ++e) a[e] += c * std::sin(std::numbers::pi * j * (e + 0.5) * h);
  }
  static const Fem1D fem;
  return fem.solve_elementwise(level, a, f);
}

Sampler pde_sampler(const AffineDiffusion& m) {
  m.validate();
  return [m](std::span<const double> y, unsigned level) { return pde_sample(m, y, level); };
}

// ---------------------------------------------------------------------------
// Holomorphic model

double HolomorphicModel::b(std::size_t j) const { return amplitude * std::pow(static_cast<double>(j), -decay); }

double HolomorphicModel::margin() const {
  double s = 0.0;
  for (std::size_t j = 1; j <= active; ++j) s += std::abs(b(j));
  return c0 - s;
}

void HolomorphicModel::validate() const {
  if (!(margin() > 0.0)) {
    std::ostringstream os;
    os << "HolomorphicModel: sum of |b_j| must stay below c0 (margin " << margin() << ")";
    throw std::invalid_argument(os.str());
  }
}

double holo_sample(const HolomorphicModel& m, std::span<const double> y) {
  double d = m.c0;
  const std::size_t n = std::min(y.size(), m.active);
  for (std::size_t j = 1; j <= n; ++j) d -= y[j - 1] * m.b(j);
  return 1.0 / d;
}

Sampler holo_sampler(const HolomorphicModel& m) {
  m.validate();
  return [m](std::span<const double> y, unsigned) { return std::vector<double>{holo_sample(m, y)}; };
}

// ---------------------------------------------------------------------------
// Tensor Gauss oracle

void tensor_gauss(const ParamSequence& params, std::size_t active, unsigned n,
                  const std::function<void(std::span<const double> y, double w)>& visit) {
  if (n == 0) throw std::invalid_argument("tensor_gauss: need n >= 1");
  if (active * std::log10(static_cast<double>(n)) > 7.0 + 1e-12) {
    std::ostringstream os;
    os << "tensor_gauss: " << n << "^" << active << " points exceeds the 1e7 cost guard";
    throw std::invalid_argument(os.str());
  }
  std::vector<GaussRule> rules;
  for (std::size_t j = 1; j <= active; ++j) rules.push_back(gauss_jacobi_rule(params.at(j), n));
  std::vector<unsigned> idx(active, 0);
  std::vector<double> y(active);
  for (std::size_t j = 0; j < active; ++j) y[j] = rules[j].nodes[0];
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < active; ++j) w *= rules[j].weights[idx[j]];
    visit(y, w);
    std::size_t j = active;
    while (j > 0) {
      --j;
      if (++idx[j] < n) {
        y[j] = rules[j].nodes[idx[j]];
        break;
      }
      idx[j] = 0;
      y[j] = rules[j].nodes[0];
      if (j == 0) return;
    }
    if (active == 0) return;
  }
}

std::vector<double> gpc_coefficient_oracle(const Sampler& v, const MultiIndex& nu, unsigned level,
                                           const ParamSequence& params, std::size_t active, unsigned n) {
  std::vector<double> out;
  const bool outside = nu.max_dimension() > active;
  std::vector<JacobiBasis> bases;
  for (std::size_t j = 1; j <= active; ++j) bases.emplace_back(params.at(j), nu[static_cast<std::uint32_t>(j)]);
  tensor_gauss(params, active, n, [&](std::span<const double> y, double w) {
    const std::vector<double> val = v(y, level);
    if (out.empty()) out.assign(val.size(), 0.0);
    if (outside) return;
    double jn = w;
    for (const auto& [d, k] : nu.entries()) jn *= bases[d - 1].eval(k, y[d - 1]);
    for (std::size_t i = 0; i < val.size(); ++i) out[i] += jn * val[i];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Weight recipes

double fit_c_epsilon(double theta0, double lambda0, double eps, unsigned kmax) {
  if (!(eps > 0.0)) throw std::invalid_argument("fit_c_epsilon: eps must be positive");
  double c = 0.0;
  for (unsigned k = 1; k <= kmax; ++k) {
    const double lhs = 2.0 * std::pow(1.0 + lambda0 * k, theta0) * std::log(2.0 * k + 3.0);
    c = std::max(c, (std::pow(lhs, 1.0 / (theta0 + eps)) - 1.0) / k);
  }
  return c;
}

double theta_zero(const ParamSequence& params) {
  double m = std::max({params.fallback().a, params.fallback().b, -0.5});
  for (const auto& p : params.leading()) m = std::max({m, p.a, p.b});
  return m + 0.5;
}

PWeightDefaults default_p_weight(const ParamSequence& params, double eps) {
  const double theta0 = theta_zero(params);
  double lambda0 = 0.0;
  if (theta0 > 0.0) {
    std::vector<JacobiParam> all = params.leading();
    all.push_back(params.fallback());
    for (const auto& p : all) lambda0 = std::max(lambda0, fit_sup_norm_lambda(p, 64));
  }
  return {theta0 + 1.0 + eps, fit_c_epsilon(theta0, lambda0, eps) + 1.0};
}

void validate_summability(const RhoSequence& rho, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("summability exponent q must be positive");
  if (rho.active != 0) return;
  if (!(rho.exponent * q > 1.0)) {
    std::ostringstream os;
    os << "(1/rho_j) with rho_j ~ j^" << rho.exponent << " is not in l_" << q;
    throw std::invalid_argument(os.str());
  }
}

ThresholdConfig WeightRecipe::config(SetVariant variant, double alpha) const {
  ThresholdConfig c;
  c.variant = variant;
  c.alpha = alpha;
  c.q1 = q1;
  c.q2 = q2;
  c.sigma1 = sigma1;
  c.sigma2 = sigma2;
  return c;
}

namespace {

void check_q1_cap(double q1, SetVariant v) {
  const double cap = v == SetVariant::kEvenQuadrature ? 4.0 : 2.0;
  if (!(q1 < cap)) {
    std::ostringstream os;
    os << "q1 = " << q1 << " must be below " << cap << " for the " << to_string(v) << " variant";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

WeightRecipe build_weight_recipe(const AffineDiffusion& m, const PdeRecipeParams& r, const ParamSequence& params) {
  m.validate();
  check_q1_cap(r.q1, r.variant);
  if (!(r.q1 <= r.q2)) throw std::invalid_argument("need q1 <= q2");

  RhoSequence rho1{r.rho1_scale, r.rho1_exponent, 0.0, r.truncate ? m.active : 0, {}};
  RhoSequence rho2{r.rho2_scale, r.rho2_exponent, 0.0, r.truncate ? m.active : 0, {}};
  rho1.validate();
  rho2.validate();
  validate_summability(rho1, r.q1);
  validate_summability(rho2, r.q2);

  // sup_x sum_j rho_{1;j} |psi_j(x)| / abar on a fine grid
  constexpr int kGrid = 4096;
  double worst = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    double s = 0.0;
    for (std::size_t j = 1; j <= m.active; ++j) s += rho1.at(j) * std::abs(m.psi(j, x));
    worst = std::max(worst, s / m.abar);
  }
  if (!(worst < 1.0)) {
    std::ostringstream os;
    os << "rho_1 violates the weighted ellipticity condition (sup = " << worst << " >= 1)";
    throw std::invalid_argument(os.str());
  }

  WeightRecipe out;
  out.sigma1 = WeightFamily::sigma(rho1, params);
  out.sigma2 = WeightFamily::sigma(rho2, params);
  out.q1 = r.q1;
  out.q2 = r.q2;
  return out;
}

std::vector<double> admissible_radii(const HolomorphicModel& m, double share, double share_exponent) {
  m.validate();
  if (!(share > 0.0 && share <= 1.0)) throw std::invalid_argument("admissible_radii: share must be in (0, 1]");
  std::vector<double> w(m.active);
  double total = 0.0;
  for (std::size_t j = 1; j <= m.active; ++j) total += w[j - 1] = std::pow(std::abs(m.b(j)), share_exponent);
  std::vector<double> rho(m.active);
  for (std::size_t j = 1; j <= m.active; ++j)
    rho[j - 1] = 1.0 + share * m.margin() * (w[j - 1] / total) / std::abs(m.b(j));
  return rho;
}

WeightRecipe build_weight_recipe(const HolomorphicModel& m, const HoloRecipeParams& r) {
  if (r.kappa == 0) throw std::invalid_argument("kappa must be >= 1");
  const double pk = r.p / r.kappa;
  if (!(r.p > 0.0 && pk < 2.0)) throw std::invalid_argument("need 0 < p/kappa < 2");
  if (!(r.theta > 0.0 && r.lambda > 0.0)) throw std::invalid_argument("theta and lambda must be positive");
  const double q = 2.0 * r.p / (2.0 - pk);
  check_q1_cap(q, r.kappa >= 2 ? SetVariant::kEvenQuadrature : SetVariant::kFull);

  RhoSequence rho;
  rho.values = admissible_radii(m, r.share, r.share_exponent);
  rho.active = m.active;
  rho.validate();

  WeightFamily w;
  w.rho = rho;
  w.rho_power = 1.0 - pk / 2.0;
  w.jacobi_constants = false;
  w.theta = r.theta;
  w.lambda = r.lambda;

  WeightRecipe out;
  out.sigma1 = w;
  out.sigma2 = w;
  out.q1 = q;
  out.q2 = q;
  return out;
}

}  // namespace sgq
