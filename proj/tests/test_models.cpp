#include "doctest.h"
#include "oracles.hpp"

#include "sgq/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sgq;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_point(std::mt19937_64& rng, std::size_t dims) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> y(dims);
  for (double& c : y) c = u(rng);
  return y;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("affine diffusion parameters") {
  const AffineDiffusion m = AffineDiffusion::defaults();
  CHECK(m.amplitude == Approx(0.9 * 6 / (kPi * kPi)).epsilon(1e-14));
  CHECK(m.active == 16);
  CHECK(m.a_min() - m.tail_bound() == Approx(0.1).epsilon(1e-12));
  CHECK(m.psi(3, 0.5) == Approx(-m.amplitude / 9).epsilon(1e-14));
  const std::vector<double> y{1.0, -0.5};
  CHECK(m.coefficient(y, 0.25) ==
        Approx(1.0 + m.psi(1, 0.25) - 0.5 * m.psi(2, 0.25)).epsilon(1e-15));
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS_AS(AffineDiffusion::with_total(1.2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(AffineDiffusion::with_total(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("pde samples") {
  const Fem1D h;
  AffineDiffusion flat = AffineDiffusion::defaults();
  flat.amplitude = 0.0;
  const auto u = pde_sample(flat, std::vector<double>{0.7, -0.2}, 10);
  CHECK(h.h1_error(u, 10, [](double x) { return 0.5 - x; }) <= Fem1D::mesh_size(10));

  // y = 0 is the abar-only problem.
  const AffineDiffusion m = AffineDiffusion::defaults();
  const auto centre = pde_sample(m, std::vector<double>(16, 0.0), 6);
  const auto abar = h.solve(6, [](double) { return 1.0; }, [](double) { return 1.0; });
  for (std::size_t i = 0; i < abar.size(); ++i) CHECK(centre[i] == Approx(abar[i]).epsilon(1e-14));

  // Larger coefficient, smaller solution.
  AffineDiffusion stiff = m;
  stiff.abar = 2.0;
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto y = random_point(rng, 16);
    const auto soft = pde_sample(m, y, 7), hard = pde_sample(stiff, y, 7);
    for (std::size_t i = 0; i < soft.size(); ++i) CHECK(hard[i] < soft[i]);
  }

  // Dimensions past the active ones are ignored.
  AffineDiffusion two = m;
  two.active = 2;
  const auto a = pde_sample(two, std::vector<double>{0.3, 0.4, 0.9}, 5);
  const auto b = pde_sample(two, std::vector<double>{0.3, 0.4}, 5);
  CHECK(a == b);
  CHECK_THROWS_AS(pde_sampler(AffineDiffusion::with_total(1.5)), std::invalid_argument);
}

TEST_CASE("uniform solution bound") {
  const Fem1D h;
  const AffineDiffusion m = AffineDiffusion::defaults();
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) worst = std::max(worst, h.norm(pde_sample(m, random_point(rng, 16), 8), 8));
  CHECK(worst <= m.solution_bound());
  CHECK(worst > 0.1 * m.solution_bound());
}

TEST_CASE("holomorphic samples") {
  const HolomorphicModel m;
  CHECK(holo_sample(m, std::vector<double>(4, 0.0)) == 0.5);
  HolomorphicModel one{2.0, 0.5, 2.0, 1};
  CHECK(holo_sample(one, std::vector<double>{1.0}) == Approx(1.0 / 1.5).epsilon(1e-15));
  CHECK(m.b(2) == Approx(0.15).epsilon(1e-15));
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) worst = std::max(worst, std::abs(holo_sample(m, random_point(rng, 4))));
  CHECK(worst <= 1.0 / m.margin());
  CHECK(holo_sample(m, std::vector<double>{1, 1, 1, 1}) == Approx(1.0 / m.margin()).epsilon(1e-14));
  CHECK(holo_sampler(m)(std::vector<double>{0.1}, 7).size() == 1);
  CHECK_THROWS_AS(holo_sampler(HolomorphicModel{1.0, 0.9, 1.0, 4}), std::invalid_argument);
}

TEST_CASE("tensor Gauss cost guard and weights") {
  double total = 0.0;
  std::size_t points = 0;
  tensor_gauss(ParamSequence(JacobiParam{1, 0.5}), 3, 5, [&](std::span<const double> y, double w) {
    CHECK(y.size() == 3);
    total += w;
    ++points;
  });
  CHECK(points == 125);
  CHECK(total == Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(tensor_gauss(ParamSequence(), 16, 20, [](std::span<const double>, double) {}),
                  std::invalid_argument);
}

TEST_CASE("GPC oracle orthonormality") {
  const ParamSequence params({JacobiParam{0, 0}, JacobiParam{-0.5, -0.5}}, JacobiParam{1, 1});
  const std::vector<MultiIndex> nus{MultiIndex(), MultiIndex({{1, 2}}), MultiIndex({{2, 3}}),
                                    MultiIndex({{1, 1}, {3, 4}}), MultiIndex({{1, 5}, {2, 1}, {3, 2}})};
  for (const auto& nu : nus) {
    const Sampler jnu = [&](std::span<const double> y, unsigned) {
      double v = 1.0;
      for (const auto& [d, k] : nu.entries()) v *= eval_orthonormal(params.at(d), k, y[d - 1]);
      return std::vector<double>{v};
    };
    for (const auto& other : nus) {
      const double c = gpc_coefficient_oracle(jnu, other, 0, params, 3, 12)[0];
      CHECK(std::abs(c - (other == nu ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("GPC oracle on the holomorphic mean") {
  const HolomorphicModel one{2.0, 0.5, 2.0, 1};
  const double mean = gpc_coefficient_oracle(holo_sampler(one), MultiIndex(), 0, ParamSequence(), 1, 40)[0];
  CHECK(mean == Approx(std::log(2.5 / 1.5)).epsilon(1e-13));
}

TEST_CASE("truncated GPC expansion reconstructs the holomorphic map") {
  const HolomorphicModel m{2.0, 0.6, 2.0, 2};
  const ParamSequence uniform;
  const Sampler v = holo_sampler(m);
  std::vector<std::pair<MultiIndex, double>> coeffs;
  for (std::uint32_t a = 0; a <= 8; ++a)
    for (std::uint32_t b = 0; b <= 8; ++b) {
      const MultiIndex nu({{1, a}, {2, b}});
      coeffs.emplace_back(nu, gpc_coefficient_oracle(v, nu, 0, uniform, 2, 30)[0]);
    }
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto y = random_point(rng, 2);
    double s = 0.0;
    for (const auto& [nu, c] : coeffs) s += c * oracle::legendre_on(nu[1], y[0]) * oracle::legendre_on(nu[2], y[1]);
    CHECK(std::abs(s - holo_sample(m, y)) < 1e-6);
  }
}

TEST_CASE("PDE GPC coefficients decay along the axes") {
  const Fem1D h;
  AffineDiffusion m = AffineDiffusion::defaults();
  m.active = 2;
  const Sampler v = pde_sampler(m);
  const ParamSequence uniform;
  const unsigned level = 6;
  const double v0 = h.norm(gpc_coefficient_oracle(v, MultiIndex(), level, uniform, 2, 12), level);
  for (std::uint32_t d : {1u, 2u}) {
    double prev = v0;
    for (std::uint32_t k = 1; k <= 6; ++k) {
      const double n = h.norm(gpc_coefficient_oracle(v, MultiIndex::unit(d, k), level, uniform, 2, 12), level);
      CHECK(n < prev);
      prev = n;
    }
  }
  const double mixed = h.norm(gpc_coefficient_oracle(v, MultiIndex({{1, 2}, {2, 1}}), level, uniform, 2, 12), level);
  CHECK(mixed < v0);
  CHECK(norm2(gpc_coefficient_oracle(v, MultiIndex(), level, uniform, 2, 12)) > 0.0);
}

TEST_CASE("p-weight defaults") {
  CHECK(theta_zero(ParamSequence()) == 0.5);
  CHECK(theta_zero(ParamSequence(JacobiParam{-0.5, -0.5})) == 0.0);
  CHECK(theta_zero(ParamSequence({JacobiParam{1, 0}}, JacobiParam{0, 0})) == 1.5);
  const PWeightDefaults d = default_p_weight(ParamSequence(), 0.1);
  CHECK(d.theta == Approx(1.6).epsilon(1e-15));
  CHECK(d.lambda > 1.0);

  for (double theta0 : {0.5, 1.0, 1.5}) {
    const double lambda0 = 1.0, eps = 0.1;
    const double c = fit_c_epsilon(theta0, lambda0, eps, 500);
    bool tight = false;
    for (unsigned k = 1; k <= 500; ++k) {
      const double lhs = 2.0 * std::pow(1.0 + lambda0 * k, theta0) * std::log(2.0 * k + 3.0);
      CHECK(lhs <= std::pow(c * k + 1.0, theta0 + eps) * (1 + 1e-12));
      if (lhs > std::pow(0.99 * c * k + 1.0, theta0 + eps)) tight = true;
    }
    CHECK(tight);
  }
  CHECK_THROWS_AS(fit_c_epsilon(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("PDE weight recipe") {
  const AffineDiffusion m = AffineDiffusion::defaults();
  const ParamSequence uniform;
  const WeightRecipe r = build_weight_recipe(m, PdeRecipeParams{}, uniform);
  CHECK(r.q1 == 0.5);
  CHECK(r.q2 == 0.6);
  CHECK(r.sigma1.rho.at(4) == Approx(2.2).epsilon(1e-14));
  CHECK(r.sigma2.rho.at(2) == Approx(12.0).epsilon(1e-14));
  CHECK(std::isinf(r.sigma1.rho.at(17)));
  CHECK_NOTHROW(r.config(SetVariant::kFull, 1.0).validate());

  PdeRecipeParams flat;
  flat.rho1_scale = 1.05;
  flat.rho1_exponent = 0.0;
  CHECK_NOTHROW(build_weight_recipe(m, flat, uniform));

  PdeRecipeParams loud;
  loud.rho1_scale = 3.0;
  loud.rho1_exponent = 0.0;
  CHECK_THROWS_AS(build_weight_recipe(m, loud, uniform), std::invalid_argument);

  // Untruncated sequences must be summable: rho_1 ~ j^0.5 needs q1 > 2.
  PdeRecipeParams slow;
  slow.truncate = false;
  CHECK_THROWS_AS(build_weight_recipe(m, slow, uniform), std::invalid_argument);
  slow.variant = SetVariant::kEvenQuadrature;
  slow.q1 = 2.5;
  slow.q2 = 3.0;
  CHECK_NOTHROW(build_weight_recipe(m, slow, uniform));
  slow.rho2_exponent = 0.3;  // (j^-0.3) is not in l_3
  CHECK_THROWS_AS(build_weight_recipe(m, slow, uniform), std::invalid_argument);

  PdeRecipeParams wide;
  wide.q1 = 2.5;
  wide.q2 = 3.0;
  CHECK_THROWS_AS(build_weight_recipe(m, wide, uniform), std::invalid_argument);
  wide.variant = SetVariant::kEvenQuadrature;
  CHECK_NOTHROW(build_weight_recipe(m, wide, uniform));

  PdeRecipeParams swapped;
  swapped.q1 = 0.7;
  swapped.q2 = 0.6;
  CHECK_THROWS_AS(build_weight_recipe(m, swapped, uniform), std::invalid_argument);
}

TEST_CASE("summability check") {
  RhoSequence rho{2.0, 2.0, 0.0, 0, {}};
  CHECK_NOTHROW(validate_summability(rho, 0.6));
  CHECK_THROWS_AS(validate_summability(rho, 0.5), std::invalid_argument);
  rho.active = 8;
  CHECK_NOTHROW(validate_summability(rho, 0.1));
  CHECK_THROWS_AS(validate_summability(rho, 0.0), std::invalid_argument);
}

TEST_CASE("holomorphic weight recipe") {
  const HolomorphicModel m;
  for (double e : {0.0, 0.5, 1.0}) {
    const auto rho = admissible_radii(m, 0.8, e);
    REQUIRE(rho.size() == m.active);
    double s = 0.0;
    for (std::size_t j = 1; j <= m.active; ++j) {
      CHECK(rho[j - 1] > 1.0);
      s += m.b(j) * (rho[j - 1] - 1.0);
    }
    CHECK(s == Approx(0.8 * m.margin()).epsilon(1e-13));
  }
  CHECK_THROWS_AS(admissible_radii(m, 1.5, 0.0), std::invalid_argument);

  HoloRecipeParams p;
  p.p = 0.5;
  const WeightRecipe r1 = build_weight_recipe(m, p);
  CHECK(r1.q1 == Approx(2 * 0.5 / 1.5).epsilon(1e-15));
  const MultiIndex e1 = MultiIndex::unit(1);
  const double rho1 = admissible_radii(m, p.share, p.share_exponent)[0];
  CHECK(r1.sigma1.weight(e1) ==
        Approx(std::pow(rho1, 1 - 0.5 / 2) * p_weight(e1, p.theta, p.lambda)).epsilon(1e-13));

  // kappa = 2 lowers q and lifts the cap, so larger p is admissible.
  p.p = 1.0;
  CHECK_THROWS_AS(build_weight_recipe(m, p), std::invalid_argument);
  p.kappa = 2;
  const WeightRecipe r2 = build_weight_recipe(m, p);
  CHECK(r2.q1 == Approx(2.0 / 1.5).epsilon(1e-15));
  p.p = 1.5;
  CHECK_NOTHROW(build_weight_recipe(m, p));
  p.kappa = 0;
  CHECK_THROWS_AS(build_weight_recipe(m, p), std::invalid_argument);
}

}
