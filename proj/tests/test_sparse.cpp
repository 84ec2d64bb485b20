#include "doctest.h"
#include "oracles.hpp"

#include "sgq/audits.hpp"
#include "sgq/interp1d.hpp"
#include "sgq/models.hpp"
#include "sgq/sparse.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sgq;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

IndexSet at_level(const std::vector<MultiIndex>& set, unsigned level = 0) {
  std::vector<IndexEntry> e;
  for (const auto& nu : set) e.push_back({level, nu});
  return IndexSet(std::move(e));
}

MultiIndex mi(std::vector<MultiIndex::Entry> e) { return MultiIndex(std::move(e)); }

// Product of orthonormal Legendre polynomials, independent of the library.
double legendre_product(const MultiIndex& nu, std::span<const double> y) {
  double v = 1.0;
  for (const auto& [d, k] : nu.entries()) v *= oracle::legendre_on(k, d <= y.size() ? y[d - 1] : 0.0);
  return v;
}

// Tensor Gauss-Legendre over `dims` dimensions.
template <class F>
double tensor_legendre(unsigned dims, unsigned n, F&& f) {
  const auto g = oracle::gauss_legendre(n);
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> y(dims);
  double s = 0.0;
  while (true) {
    double w = 1.0;
    for (unsigned d = 0; d < dims; ++d) {
      y[d] = g.x[idx[d]];
      w *= g.w[idx[d]];
    }
    s += w * f(std::span<const double>(y));
    unsigned d = 0;
    while (d < dims && ++idx[d] == n) idx[d++] = 0;
    if (d == dims) break;
  }
  return s;
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t dims) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> y(dims);
  for (double& c : y) c = u(rng);
  return y;
}

// A smooth y-dependent family in V_{2^k}: nodal values of
// sin(pi x) / (2 + y_1 x + y_2 x^2 / 2).
Sampler fem_family() {
  return [](std::span<const double> y, unsigned level) {
    const double y1 = y.size() > 0 ? y[0] : 0.0, y2 = y.size() > 1 ? y[1] : 0.0;
    return Fem1D().project(level, [&](double x) { return std::sin(kPi * x) / (2 + y1 * x + 0.5 * y2 * x * x); });
  };
}

}  // namespace

TEST_SUITE("sparse") {

TEST_CASE("combination terms") {
  const auto t = combination_terms(at_level({mi({{1, 1}})}), false);
  REQUIRE(t.size() == 2);
  CHECK(t[0].mu.is_zero());
  CHECK(t[0].coefficient == -1.0);
  CHECK(t[1].mu == mi({{1, 1}}));
  CHECK(t[1].coefficient == 1.0);

  // A downward closed set collapses to its maximal rectangles.
  const auto box = combination_terms(at_level({MultiIndex(), mi({{1, 1}}), mi({{2, 1}}), mi({{1, 1}, {2, 1}})}), false);
  REQUIRE(box.size() == 1);
  CHECK(box[0].mu == mi({{1, 1}, {2, 1}}));
  CHECK(box[0].coefficient == 1.0);

  const auto sym = combination_terms(at_level({mi({{3, 2}})}, 2), true);
  REQUIRE(sym.size() == 2);
  CHECK(sym[0].level == 2);
  CHECK(sym[0].mu.is_zero());
  CHECK(sym[1].mu == mi({{3, 2}}));
  CHECK_THROWS_AS(combination_terms(at_level({mi({{1, 1}})}), true), std::invalid_argument);
  CHECK(combination_terms(IndexSet(), false).empty());
}

TEST_CASE("grid points") {
  const MultiIndex mu = mi({{2, 1}, {4, 2}});
  CHECK(grid_size(mu) == 6);
  CHECK(grid_size(MultiIndex()) == 1);
  std::vector<double> y;
  grid_point(mu, 0, y);
  REQUIRE(y.size() == 4);
  CHECK(y[0] == 0.0);
  CHECK(y[2] == 0.0);
  CHECK(y[1] == chebyshev_nodes(1).nodes[0]);
  CHECK(y[3] == chebyshev_nodes(2).nodes[0]);
  grid_point(mu, 4, y);  // last support dimension fastest
  CHECK(y[1] == chebyshev_nodes(1).nodes[1]);
  CHECK(y[3] == chebyshev_nodes(2).nodes[1]);
}

TEST_CASE("empty surrogate evaluates to zero") {
  const ScalarHierarchy h;
  const SparseSurrogate s = build_interpolant(IndexSet(), holo_sampler(HolomorphicModel{}), h, false);
  CHECK(s.terms.empty());
  const auto v = s.evaluate(std::vector<double>{0.3, -0.1}, h);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == 0.0);
}

TEST_CASE("reproduces J_nu on random downward closed sets") {
  std::mt19937_64 rng(17);
  const ScalarHierarchy h;
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = random_downward_closed(rng, 25, 3, false);
    REQUIRE(is_downward_closed(set, false));
    const IndexSet g = at_level(set);
    for (const auto& nu : set) {
      const SparseSurrogate s = build_interpolant(
          g, [&](std::span<const double> y, unsigned) { return std::vector<double>{legendre_product(nu, y)}; }, h,
          false);
      for (int i = 0; i < 10; ++i) {
        const auto y = random_point(rng, 3);
        CHECK(std::abs(s.evaluate(y, h)[0] - legendre_product(nu, y)) < 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric interpolant reproduces J_nu on even sets") {
  std::mt19937_64 rng(23);
  const ScalarHierarchy h;
  for (int trial = 0; trial < 5; ++trial) {
    const auto set = random_downward_closed(rng, 15, 3, true);
    const IndexSet g = at_level(set);
    REQUIRE(g.all_even());
    for (const auto& nu : set) {
      const SparseSurrogate s = build_interpolant(
          g, [&](std::span<const double> y, unsigned) { return std::vector<double>{legendre_product(nu, y)}; }, h,
          true);
      for (int i = 0; i < 5; ++i) {
        const auto y = random_point(rng, 3);
        CHECK(std::abs(s.evaluate(y, h)[0] - legendre_product(nu, y)) < 1e-10);
      }
    }
  }
}

TEST_CASE("y-independent data gives the telescoped spatial projection") {
  const Fem1D h;
  const auto w = [](double x) { return x * (1 - x) * std::cos(2 * x); };
  const Sampler v = [&](std::span<const double>, unsigned k) { return h.project(k, w); };
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 6; ++k) e.push_back({k, MultiIndex()});
  const IndexSet g(e);
  const SparseSurrogate s = build_interpolant(g, v, h, false);
  const auto target = h.project(6, w);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    const auto got = s.evaluate(random_point(rng, 4), h);
    REQUIRE(got.size() == target.size());
    for (std::size_t r = 0; r < got.size(); ++r) CHECK(std::abs(got[r] - target[r]) < 1e-14);
  }
  const auto q = quadrature(g, v, h, ParamSequence(JacobiParam{0.5, 0.5}));
  for (std::size_t r = 0; r < q.size(); ++r) CHECK(std::abs(q[r] - target[r]) < 1e-14);
}

TEST_CASE("tensor polynomial data is reproduced exactly") {
  // v(y) = (1 + y1 + y1^2)(2 - y2^3) x(1-x) with G the level-0 box of orders (2, 3).
  const Fem1D h;
  const Sampler v = [&](std::span<const double> y, unsigned k) {
    const double y1 = y.size() > 0 ? y[0] : 0.0, y2 = y.size() > 1 ? y[1] : 0.0;
    const double c = (1 + y1 + y1 * y1) * (2 - y2 * y2 * y2);
    return h.project(k, [&](double x) { return c * x * (1 - x); });
  };
  std::vector<MultiIndex> box;
  for (std::uint32_t a = 0; a <= 2; ++a)
    for (std::uint32_t b = 0; b <= 3; ++b) box.push_back(mi({{1, a}, {2, b}}));
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 4; ++k)
    for (const auto& nu : box) e.push_back({k, nu});
  const SparseSurrogate s = build_interpolant(IndexSet(e), v, h, false);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto y = random_point(rng, 2);
    const auto got = s.evaluate(y, h);
    const auto want = v(y, 4);
    for (std::size_t r = 0; r < got.size(); ++r) CHECK(std::abs(got[r] - want[r]) < 1e-13);
  }
}

TEST_CASE("interpolates at the nodes of a single rectangle") {
  const ScalarHierarchy h;
  const HolomorphicModel m;
  const Sampler v = holo_sampler(m);
  const MultiIndex mu = mi({{1, 3}, {2, 2}, {4, 1}});
  std::vector<MultiIndex> box;
  for (std::uint32_t a = 0; a <= 3; ++a)
    for (std::uint32_t b = 0; b <= 2; ++b)
      for (std::uint32_t c = 0; c <= 1; ++c) box.push_back(mi({{1, a}, {2, b}, {4, c}}));
  const SparseSurrogate s = build_interpolant(at_level(box), v, h, false);
  std::vector<double> y;
  for (std::size_t p = 0; p < grid_size(mu); ++p) {
    grid_point(mu, p, y);
    CHECK(s.evaluate(y, h)[0] == Approx(v(y, 0)[0]).epsilon(1e-13));
  }
}

TEST_CASE("linearity in the data") {
  std::mt19937_64 rng(6);
  const Fem1D h;
  const auto set = random_downward_closed(rng, 12, 2, false);
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 3; ++k)
    for (const auto& nu : set) e.push_back({k, nu});
  const IndexSet g(e);
  const Sampler v1 = fem_family();
  const Sampler v2 = [&](std::span<const double> y, unsigned k) {
    const double y1 = y.size() > 0 ? y[0] : 0.0;
    return h.project(k, [&](double x) { return std::exp(y1 * x) * x * (1 - x); });
  };
  const Sampler sum = [&](std::span<const double> y, unsigned k) {
    auto a = v1(y, k);
    const auto b = v2(y, k);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] - 3.0 * b[i];
    return a;
  };
  const auto s1 = build_interpolant(g, v1, h, false), s2 = build_interpolant(g, v2, h, false),
             s12 = build_interpolant(g, sum, h, false);
  for (int i = 0; i < 10; ++i) {
    const auto y = random_point(rng, 2);
    const auto a = s1.evaluate(y, h), b = s2.evaluate(y, h), c = s12.evaluate(y, h);
    for (std::size_t r = 0; r < c.size(); ++r) CHECK(c[r] == Approx(a[r] - 3.0 * b[r]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("quadrature equals the Gauss integral of the symmetric interpolant") {
  std::mt19937_64 rng(31);
  const Fem1D h;
  const ParamSequence uniform;
  const Sampler v = fem_family();
  for (int trial = 0; trial < 4; ++trial) {
    const auto set = random_downward_closed(rng, 10, 2, true);
    std::vector<IndexEntry> e;
    for (unsigned k = 0; k <= 3; ++k)
      for (const auto& nu : set)
        if (k == 0 || nu.total_order() <= 4) e.push_back({k, nu});
    const IndexSet g(e);
    const SparseSurrogate s = build_interpolant(g, v, h, true);
    const auto q = quadrature(g, v, h, uniform);
    const auto closed = s.integrate(uniform, h);
    REQUIRE(q.size() == Fem1D::dofs(g.max_level()));
    for (std::size_t r = 0; r < q.size(); ++r) {
      const double gauss = tensor_legendre(2, 20, [&](std::span<const double> y) { return s.evaluate(y, h)[r]; });
      CHECK(q[r] == Approx(gauss).epsilon(1e-10).scale(1.0));
      CHECK(closed[r] == Approx(gauss).epsilon(1e-10).scale(1.0));
    }
  }
  CHECK_THROWS_AS(quadrature(at_level({mi({{1, 1}})}), v, h, uniform), std::invalid_argument);
}

TEST_CASE("quadrature of J_nu") {
  const ScalarHierarchy h;
  const ParamSequence uniform;
  std::vector<MultiIndex> box;
  for (std::uint32_t a = 0; a <= 6; a += 2)
    for (std::uint32_t b = 0; b <= 4; b += 2) box.push_back(mi({{1, a}, {2, b}}));
  const IndexSet g = at_level(box);
  for (const auto& nu : box) {
    if (nu.is_zero()) continue;
    const double q =
        quadrature(g, [&](std::span<const double> y, unsigned) { return std::vector<double>{legendre_product(nu, y)}; },
                   h, uniform)[0];
    CHECK(std::abs(q) < 1e-12);
  }
  // Odd components are annihilated even far outside the set.
  for (const MultiIndex& nu : {mi({{1, 1}}), mi({{1, 9}, {2, 2}}), mi({{2, 15}}), mi({{1, 3}, {3, 5}})}) {
    const double q =
        quadrature(g, [&](std::span<const double> y, unsigned) { return std::vector<double>{legendre_product(nu, y)}; },
                   h, uniform)[0];
    CHECK(std::abs(q) < 1e-12);
  }
}

TEST_CASE("odd GPC components do not change the quadrature") {
  std::mt19937_64 rng(41);
  const ScalarHierarchy h;
  for (JacobiParam p : {JacobiParam{0, 0}, JacobiParam{-0.5, -0.5}, JacobiParam{2, 2}}) {
    const ParamSequence params(p);
    const Sampler base = holo_sampler(HolomorphicModel{});
    for (int trial = 0; trial < 10; ++trial) {
      const IndexSet g = at_level(random_downward_closed(rng, 20, 4, true));
      const MultiIndex odd = mi({{static_cast<std::uint32_t>(1 + trial % 4), static_cast<std::uint32_t>(2 * trial + 1)}});
      const Sampler injected = [&](std::span<const double> y, unsigned k) {
        auto v = base(y, k);
        double j = 1.0;
        for (const auto& [d, o] : odd.entries()) j *= eval_orthonormal(p, o, d <= y.size() ? y[d - 1] : 0.0);
        v[0] += j;
        return v;
      };
      CHECK(std::abs(quadrature(g, injected, h, params)[0] - quadrature(g, base, h, params)[0]) < 1e-12);
    }
  }
}

TEST_CASE("functional quadrature") {
  const Fem1D h;
  const ParamSequence uniform;
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 4; ++k) e.push_back({k, MultiIndex()});
  e.push_back({0, mi({{1, 2}})});
  e.push_back({1, mi({{1, 2}})});
  const IndexSet g(e);
  const Sampler v = fem_family();
  const std::size_t n = Fem1D::dofs(4);
  const auto q = quadrature(g, v, h, uniform);
  std::vector<double> phi(n, 0.0);
  CHECK(functional_quadrature(g, v, h, uniform, phi) == 0.0);
  phi[n / 2] = 1.0;  // point evaluation at x = 1/2
  const double mid = functional_quadrature(g, v, h, uniform, phi);
  CHECK(mid == q[n / 2]);
  for (double& x : phi) x *= 2.0;
  CHECK(functional_quadrature(g, v, h, uniform, phi) == 2.0 * mid);
  CHECK_THROWS_AS(functional_quadrature(g, v, h, uniform, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("sampler block size is checked") {
  const Fem1D h;
  const Sampler bad = [](std::span<const double>, unsigned) { return std::vector<double>(2, 0.0); };
  const IndexSet g = at_level({MultiIndex()}, 3);
  CHECK_THROWS_AS(build_interpolant(g, bad, h, false), std::runtime_error);
  CHECK_THROWS_AS(quadrature(g, bad, h, ParamSequence()), std::runtime_error);
}

TEST_CASE("sample cache") {
  int calls = 0;
  SampleCache cache([&](std::span<const double> y, unsigned level) {
    ++calls;
    return std::vector<double>{y.empty() ? 0.0 : y[0], static_cast<double>(level)};
  });
  const auto& a = cache.get(std::vector<double>{0.3}, 1);
  const auto& b = cache.get(std::vector<double>{0.3, 0.0}, 1);
  CHECK(&a == &b);
  cache.get(std::vector<double>{0.3}, 2);
  cache.get(std::vector<double>{0.0, 0.3}, 1);
  CHECK(calls == 3);
  CHECK(cache.misses() == 3);
  CHECK(cache.hits() == 1);

  std::mt19937_64 rng(4);
  const Fem1D h;
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 3; ++k)
    for (const auto& nu : random_downward_closed(rng, 10, 3, false)) e.push_back({k, nu});
  const SparseSurrogate s = build_interpolant(IndexSet(e), fem_family(), h, false);
  CHECK(s.stats.sampler_calls >= s.stats.distinct_points);
  CHECK(s.stats.grid_points >= s.stats.distinct_points);
  CHECK(s.stats.sampler_calls + s.stats.cache_hits >= s.stats.grid_points);
}

TEST_CASE("truncation projector") {
  const Fem1D h;
  const GpcSampler none = [](const MultiIndex&, unsigned k) { return std::vector<double>(Fem1D::dofs(k), 0.0); };
  CHECK(truncation_projector(IndexSet(), none, h).empty());

  // Single term: S_G v = P_{2^K}(v_nu) J_nu.
  const MultiIndex nu = mi({{2, 3}});
  const auto w = [](double x) { return std::sin(kPi * x) + x * (1 - x); };
  const GpcSampler single = [&](const MultiIndex& m, unsigned k) {
    return m == nu ? h.project(k, w) : std::vector<double>(Fem1D::dofs(k), 0.0);
  };
  std::vector<IndexEntry> e;
  for (unsigned k = 0; k <= 5; ++k) e.push_back({k, nu});
  const GpcExpansion s = truncation_projector(IndexSet(e), single, h);
  REQUIRE(s.size() == 1);
  CHECK(s.begin()->second.first == 5);
  const auto want = h.project(5, w);
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(s.begin()->second.second[i] - want[i]) < 1e-14);
}

TEST_CASE("Parseval and tensor Gauss agree on the truncation error") {
  // v(y) = sum over a few nu of J_nu(y) w_nu with w_nu = sin(j pi x) / 4^|nu|.
  const Fem1D h;
  const unsigned fine = 7;
  std::vector<MultiIndex> support;
  for (std::uint32_t a = 0; a <= 3; ++a)
    for (std::uint32_t b = 0; a + b <= 3; ++b) support.push_back(mi({{1, a}, {2, b}}));
  const auto w = [&](const MultiIndex& m) {
    const int j = 1 + static_cast<int>(m[1]) + 2 * static_cast<int>(m[2]);
    const double scale = std::pow(0.25, m.total_order());
    return [=](double x) { return scale * std::sin(j * kPi * x); };
  };
  const GpcSampler gpc = [&](const MultiIndex& m, unsigned k) {
    for (const auto& s : support)
      if (s == m) return h.project(k, w(m));
    return std::vector<double>(Fem1D::dofs(k), 0.0);
  };
  // G: deeper levels for lower orders.
  std::vector<IndexEntry> e;
  for (const auto& nu : support)
    for (unsigned k = 0; k + nu.total_order() <= 5; ++k) e.push_back({k, nu});
  const GpcExpansion sg = truncation_projector(IndexSet(e), gpc, h);

  double parseval = 0.0;
  for (const auto& nu : support) {
    auto diff = gpc(nu, fine);
    if (auto it = sg.find(nu); it != sg.end()) {
      const auto p = h.prolong(it->second.second, it->second.first, fine);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= p[i];
    }
    parseval += std::pow(h.norm(diff, fine), 2);
  }
  const double gauss = tensor_legendre(2, 8, [&](std::span<const double> y) {
    std::vector<double> r(Fem1D::dofs(fine), 0.0);
    for (const auto& nu : support) {
      const double j = legendre_product(nu, y);
      const auto v = gpc(nu, fine);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += j * v[i];
    }
    for (const auto& [nu, lv] : sg) {
      const double j = legendre_product(nu, y);
      const auto p = h.prolong(lv.second, lv.first, fine);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= j * p[i];
    }
    return std::pow(h.norm(r, fine), 2);
  });
  CHECK(parseval > 1e-6);
  CHECK(std::abs(std::sqrt(parseval) - std::sqrt(gauss)) < 1e-8);
}

}
