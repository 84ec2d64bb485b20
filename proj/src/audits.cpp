#include "sgq/audits.hpp"

#include "sgq/interp1d.hpp"
#include "sgq/jacobi.hpp"
#include "sgq/models.hpp"
#include "sgq/quad1d.hpp"
#include "sgq/serialize.hpp"
#include "sgq/sparse.hpp"
#include "sgq/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace sgq {

namespace {

const std::vector<JacobiParam> kPairs = {{0.0, 0.0}, {-0.5, -0.5}, {1.0, 1.0}, {0.5, -0.3}};

std::string fmt(const char* what, double value) {
  std::ostringstream os;
  os.precision(3);
  os << what << " " << value;
  return os.str();
}

AuditResult audit_orthonormality() {
  double worst = 0.0;
  for (const auto& p : kPairs) {
    const GaussRule g = gauss_jacobi_rule(p, 25);
    const JacobiBasis basis(p, 20);
    std::vector<std::vector<double>> vals(g.nodes.size(), std::vector<double>(21));
    for (std::size_t i = 0; i < g.nodes.size(); ++i) basis.eval_all(g.nodes[i], vals[i]);
    for (unsigned k = 0; k <= 20; ++k)
      for (unsigned l = 0; l <= k; ++l) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * vals[i][k] * vals[i][l];
        worst = std::max(worst, std::abs(s - (k == l ? 1.0 : 0.0)));
      }
  }
  return {"orthonormality k,l <= 20", worst < 1e-10, fmt("max deviation", worst)};
}

// E[((1+y)/2)^i] for y = 2B - 1, B ~ Beta(b+1, a+1).
double beta_moment(const JacobiParam& p, unsigned i) {
  double m = 1.0;
  for (unsigned r = 0; r < i; ++r) m *= (p.b + 1.0 + r) / (p.a + p.b + 2.0 + r);
  return m;
}

AuditResult audit_moments() {
  double worst = 0.0;
  for (const auto& p : kPairs) {
    const GaussRule g = gauss_jacobi_rule(p, 16);
    for (unsigned i = 0; i <= 31; ++i) {
      const double q = g.integrate([&](double y) { return std::pow(0.5 * (1.0 + y), i); });
      worst = std::max(worst, std::abs(q / beta_moment(p, i) - 1.0));
      for (unsigned m = i; m <= 32 && m <= i + 1; ++m) {
        const QuadRule& r = interpolatory_weights(p, m);
        const double qm = r.apply([&](double y) { return std::pow(0.5 * (1.0 + y), i); });
        worst = std::max(worst, std::abs(qm / beta_moment(p, i) - 1.0));
      }
    }
  }
  return {"Gauss and interpolatory moments", worst < 1e-12, fmt("max relative error", worst)};
}

AuditResult audit_exactness() {
  double worst = 0.0;
  const std::vector<double> probe = {-0.97, -0.61, -0.2, 0.0, 0.33, 0.72, 0.999};
  for (unsigned m = 0; m <= 32; ++m) {
    for (unsigned d = 0; d <= m; ++d) {
      const auto f = [&](double y) { return std::legendre(d, y); };
      const UnivariatePoly pm = interpolate(m, f);
      for (double y : probe) {
        worst = std::max(worst, std::abs(pm(y) - f(y)));
        if (d + 1 <= m) worst = std::max(worst, std::abs(increment_apply(m, f, y, false)));
        if (m % 2 == 0 && d + 2 <= m) worst = std::max(worst, std::abs(increment_apply(m, f, y, true)));
      }
      if (m % 2 == 0 && d + 2 <= m)
        for (const auto& p : kPairs) worst = std::max(worst, std::abs(increment_weights(p, m).apply(f)));
    }
  }
  return {"interpolation exactness and increments, m <= 32", worst < 1e-12, fmt("max error", worst)};
}

AuditResult audit_lebesgue() {
  double margin = 1e300;
  for (unsigned m = 0; m <= 64; ++m) margin = std::min(margin, std::log(2.0 * m + 3.0) - lebesgue_estimate(m));
  return {"Lebesgue constant below log(2m+3), m <= 64", margin > 0.0, fmt("smallest margin", margin)};
}

double product_basis(const ParamSequence& params, const MultiIndex& nu, std::span<const double> y) {
  double v = 1.0;
  for (const auto& [d, k] : nu.entries()) v *= eval_orthonormal(params.at(d), k, d <= y.size() ? y[d - 1] : 0.0);
  return v;
}

IndexSet level_zero(const std::vector<MultiIndex>& set) {
  std::vector<IndexEntry> e;
  for (const auto& nu : set) e.push_back({0, nu});
  return IndexSet(std::move(e));
}

AuditResult audit_reproduction(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const ParamSequence params(JacobiParam{0.5, -0.3});
  const ScalarHierarchy h;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = random_downward_closed(rng, 30, 4, false);
    const IndexSet g = level_zero(set);
    for (const auto& nu : set) {
      const SparseSurrogate s = build_interpolant(
          g, [&](std::span<const double> y, unsigned) { return std::vector<double>{product_basis(params, nu, y)}; },
          h, false);
      for (int i = 0; i < 5; ++i) {
        std::vector<double> y(4);
        for (double& c : y) c = unif(rng);
        worst = std::max(worst, std::abs(s.evaluate(y, h)[0] - product_basis(params, nu, y)));
      }
    }
  }
  return {"sparse interpolation reproduces J_nu on its set", worst < 1e-10, fmt("max error", worst)};
}

AuditResult audit_odd_cancellation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ParamSequence params(JacobiParam{0.5, 0.5});
  const ScalarHierarchy h;
  const HolomorphicModel model;
  const Sampler base = holo_sampler(model);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = random_downward_closed(rng, 20, 4, true);
    const IndexSet g = level_zero(set);
    // An odd order in dimension 1 or 2, arbitrary orders elsewhere.
    const auto dim = static_cast<std::uint32_t>(1 + trial % 2);
    const auto order = static_cast<std::uint32_t>(2 * (trial % 3) + 1);
    const MultiIndex odd({{dim, order}, {3u, 2u}});
    const double plain = quadrature(g, base, h, params)[0];
    const double injected = quadrature(
        g,
        [&](std::span<const double> y, unsigned level) {
          std::vector<double> v = base(y, level);
          v[0] += product_basis(params, odd, y);
          return v;
        },
        h, params)[0];
    worst = std::max(worst, std::abs(injected - plain));
  }
  return {"odd GPC terms cancel under symmetric quadrature", worst < 1e-12, fmt("max change", worst)};
}

AuditResult audit_spatial_rate() {
  const Fem1D fem;
  double lo = 1e300, hi = -1e300;
  for (int j : {1, 2, 4}) {
    std::vector<double> m, err;
    for (unsigned k = 4; k <= 10; ++k) {
      const double pj = j * std::numbers::pi;
      const auto u = fem.project(k, [&](double x) { return std::sin(pj * x); });
      m.push_back(std::ldexp(1.0, static_cast<int>(k)));
      err.push_back(fem.h1_error(u, k, [&](double x) { return pj * std::cos(pj * x); }));
    }
    const double rate = -fitted_slope(m, err);
    lo = std::min(lo, rate);
    hi = std::max(hi, rate);
  }
  std::ostringstream os;
  os << "rates in [" << lo << ", " << hi << "]";
  return {"P1 H1 rate for sin(j pi x)", lo >= 0.9 && hi <= 1.1, os.str()};
}

AuditResult audit_telescoping() {
  const Fem1D fem;
  const auto w = [](double x) { return x * (1.0 - x) * std::exp(x); };
  const unsigned top = 9;
  std::vector<double> acc(fem.dim(top), 0.0);
  for (unsigned k = 0; k <= top; ++k) {
    const auto d = detail(fem, k, [&](unsigned l) { return fem.project(l, w); });
    const auto fine = fem.prolong(d, k, top);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fine[i];
  }
  const auto direct = fem.project(top, w);
  double worst = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) worst = std::max(worst, std::abs(acc[i] - direct[i]));
  return {"details telescope to the finest projection", worst < 1e-14, fmt("max error", worst)};
}

AuditResult audit_sampler() {
  const std::size_t n = 4000;
  const auto pts = sample_measure(ParamSequence(JacobiParam{0.0, 0.0}), 3, n, 11);
  double worst = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (const auto& y : pts) mean += y[j];
    worst = std::max(worst, std::abs(mean / n));
  }
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  return {"uniform sampler mean", worst < bound, fmt("max |mean|", worst)};
}

AuditResult audit_reference() {
  ExperimentConfig cfg;
  cfg.model = ModelKind::kHolomorphic;
  cfg.holo = {2.0, 0.5, 2.0, 1};
  cfg.error.reference_order = 20;
  const double ref = reference_integral(cfg)[0];
  const double exact = std::log(2.5 / 1.5);
  return {"holomorphic reference integral, one dimension", std::abs(ref - exact) < 1e-12,
          fmt("error", std::abs(ref - exact))};
}

AuditResult audit_rule_roundtrip() {
  std::mt19937_64 rng(5);
  const ParamSequence params(JacobiParam{0.25, 0.25});
  const IndexSet g = level_zero(random_downward_closed(rng, 12, 3, true));
  const ExportedRule r = make_rule(g, params, true);
  const ExportedRule back = import_rule(export_rule(r));
  bool same = back.terms.size() == r.terms.size() && back.set.to_text() == g.to_text();
  for (std::size_t t = 0; same && t < r.terms.size(); ++t)
    same = back.terms[t].weights == r.terms[t].weights && back.terms[t].points == r.terms[t].points;
  return {"rule export round trip", same, same ? "bit-identical" : "mismatch"};
}

}  // namespace

std::vector<MultiIndex> random_downward_closed(std::mt19937_64& rng, std::size_t size, std::uint32_t dims,
                                               bool even) {
  const std::uint32_t step = even ? 2 : 1;
  std::set<MultiIndex> set{MultiIndex{}};
  std::vector<MultiIndex> order{MultiIndex{}};
  std::uniform_int_distribution<std::uint32_t> pick_dim(1, dims);
  for (int attempt = 0; set.size() < size && attempt < 200 * static_cast<int>(size); ++attempt) {
    const MultiIndex& from = order[std::uniform_int_distribution<std::size_t>(0, order.size() - 1)(rng)];
    const std::uint32_t d = pick_dim(rng);
    const MultiIndex cand = from.with(d, from[d] + step);
    if (set.count(cand)) continue;
    bool closed = true;
    for (const auto& [j, v] : cand.entries())
      if (!set.count(cand.with(j, v - step))) closed = false;
    if (!closed) continue;
    set.insert(cand);
    order.push_back(cand);
  }
  return order;
}

std::vector<AuditResult> run_library_audits(std::uint64_t seed) {
  return {audit_orthonormality(),   audit_moments(),        audit_exactness(),
          audit_lebesgue(),         audit_reproduction(seed), audit_odd_cancellation(seed),
          audit_spatial_rate(),     audit_telescoping(),    audit_sampler(),
          audit_reference(),        audit_rule_roundtrip()};
}

std::vector<AuditResult> audit_table(const ResultTable& t, const ExperimentConfig& cfg) {
  std::vector<AuditResult> out;
  out.push_back({"one row per budget", t.rows.size() == cfg.budgets.size(),
                 std::to_string(t.rows.size()) + " rows for " + std::to_string(cfg.budgets.size()) + " budgets"});
  std::size_t failed = 0;
  for (const auto& r : t.rows)
    if (!r.failure.empty() || !std::isfinite(r.error)) ++failed;
  out.push_back({"every budget succeeded", failed == 0, std::to_string(failed) + " failed"});
  return out;
}

bool all_passed(const std::vector<AuditResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const AuditResult& r) { return r.passed; });
}

}  // namespace sgq
