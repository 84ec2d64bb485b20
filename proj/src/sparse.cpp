#include "sgq/sparse.hpp"

#include "sgq/interp1d.hpp"
#include "sgq/quad1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace sgq {

const std::vector<double>& SampleCache::get(std::span<const double> y, unsigned level) {
  Key key{level, {}};
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] == 0.0) continue;
    key.second.emplace_back(static_cast<std::uint32_t>(j + 1), std::llround(y[j] * 1e15));
  }
  std::lock_guard lock(mu_);
  auto it = store_.find(key);
  if (it != store_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  return store_.emplace(std::move(key), sampler_(y, level)).first->second;
}

std::vector<CombinationTerm> combination_terms(const IndexSet& g, bool symmetric) {
  const std::uint32_t step = symmetric ? 2 : 1;
  std::map<std::pair<unsigned, MultiIndex>, double> acc;
  for (const auto& e : g.entries()) {
    if (symmetric && !e.nu.is_even())
      throw std::invalid_argument("combination_terms: odd index " + e.nu.to_string() + " in symmetric mode");
    const auto& support = e.nu.entries();
    const std::size_t s = support.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
      MultiIndex mu = e.nu;
      int parity = 1;
      for (std::size_t i = 0; i < s; ++i) {
        if (mask & (std::size_t{1} << i)) {
          mu.set(support[i].first, support[i].second - step);
          parity = -parity;
        }
      }
      acc[{e.level, std::move(mu)}] += parity;
    }
  }
  std::vector<CombinationTerm> out;
  for (auto& [key, c] : acc)
    if (c != 0.0) out.push_back({key.first, key.second, c});
  return out;
}

std::size_t grid_size(const MultiIndex& mu) {
  std::size_t n = 1;
  for (const auto& [d, v] : mu.entries()) n *= v + 1;
  return n;
}

void grid_point(const MultiIndex& mu, std::size_t flat, std::vector<double>& y) {
  if (y.size() < mu.max_dimension()) y.resize(mu.max_dimension(), 0.0);
  const auto& support = mu.entries();
  for (std::size_t i = support.size(); i-- > 0;) {
    const auto [d, v] = support[i];
    const std::size_t idx = flat % (v + 1);
    flat /= v + 1;
    y[d - 1] = lagrange_basis(v).nodes()[idx];
  }
}

namespace {

// Adds `scale * src` (level `from`) into acc (level `to`).
void accumulate_prolonged(std::vector<double>& acc, const std::vector<double>& src, unsigned from, unsigned to,
                          const SpatialHierarchy& h) {
  if (from == to) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += src[i];
    return;
  }
  const std::vector<double> fine = h.prolong(src, from, to);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fine[i];
}

// Sums per-term contributions given per-support-dimension factor tables.
// factors[i][idx] is the factor for support dimension i at node idx.
void contract_term(const SurrogateTerm& t, const std::vector<std::vector<double>>& factors, std::size_t block,
                   std::vector<double>& acc) {
  const std::size_t npts = grid_size(t.mu);
  const auto& support = t.mu.entries();
  std::vector<std::size_t> idx(support.size(), 0);
  for (std::size_t p = 0; p < npts; ++p) {
    double w = t.coefficient;
    for (std::size_t i = 0; i < support.size(); ++i) w *= factors[i][idx[i]];
    if (w != 0.0) {
      const double* b = t.blocks.data() + p * block;
      for (std::size_t r = 0; r < block; ++r) acc[r] += w * b[r];
    }
    for (std::size_t i = support.size(); i-- > 0;) {
      if (++idx[i] <= support[i].second) break;
      idx[i] = 0;
    }
  }
}

template <class FactorFn>
std::vector<double> contract(const SparseSurrogate& s, const SpatialHierarchy& h, FactorFn&& factor) {
  std::map<unsigned, std::vector<double>> per_level;
  for (const auto& t : s.terms) {
    const std::size_t block = h.dim(t.level);
    auto& acc = per_level[t.level];
    acc.resize(block, 0.0);
    std::vector<std::vector<double>> factors;
    for (const auto& [d, v] : t.mu.entries()) factors.push_back(factor(d, v));
    contract_term(t, factors, block, acc);
  }
  std::vector<double> out(h.dim(s.finest_level), 0.0);
  for (const auto& [level, acc] : per_level) accumulate_prolonged(out, acc, level, s.finest_level, h);
  return out;
}

}  // namespace

std::vector<double> SparseSurrogate::evaluate(std::span<const double> y, const SpatialHierarchy& h) const {
  return contract(*this, h, [&](std::uint32_t d, std::uint32_t v) {
    const double yd = d <= y.size() ? y[d - 1] : 0.0;
    return lagrange_basis(v).eval(yd);
  });
}

std::vector<double> SparseSurrogate::integrate(const ParamSequence& params, const SpatialHierarchy& h) const {
  return contract(*this, h,
                  [&](std::uint32_t d, std::uint32_t v) { return interpolatory_weights(params.at(d), v).weights; });
}

SparseSurrogate build_interpolant(const IndexSet& g, SampleCache& cache, const SpatialHierarchy& h, bool symmetric) {
  SparseSurrogate s;
  s.provenance = g;
  s.symmetric = symmetric;
  s.finest_level = g.max_level();
  s.block_dim_finest = h.dim(s.finest_level);
  const std::size_t hits0 = cache.hits(), misses0 = cache.misses();

  std::set<std::pair<unsigned, std::vector<double>>> distinct;
  std::vector<double> y;
  for (auto& ct : combination_terms(g, symmetric)) {
    SurrogateTerm t{ct.level, ct.mu, ct.coefficient, {}};
    const std::size_t block = h.dim(t.level);
    const std::size_t npts = grid_size(t.mu);
    t.blocks.reserve(npts * block);
    y.assign(t.mu.max_dimension(), 0.0);
    for (std::size_t p = 0; p < npts; ++p) {
      grid_point(t.mu, p, y);
      distinct.emplace(t.level, y);
      const std::vector<double>& fine = cache.get(y, t.level);
      if (fine.size() != block) throw std::runtime_error("build_interpolant: sampler returned wrong block size");
      if (t.level == 0) {
        t.blocks.insert(t.blocks.end(), fine.begin(), fine.end());
      } else {
        const std::vector<double> coarse = h.prolong(cache.get(y, t.level - 1), t.level - 1, t.level);
        for (std::size_t r = 0; r < block; ++r) t.blocks.push_back(fine[r] - coarse[r]);
      }
    }
    s.stats.grid_points += npts;
    s.terms.push_back(std::move(t));
  }
  s.stats.distinct_points = distinct.size();
  s.stats.sampler_calls = cache.misses() - misses0;
  s.stats.cache_hits = cache.hits() - hits0;
  return s;
}

SparseSurrogate build_interpolant(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                                  bool symmetric) {
  SampleCache cache(sampler);
  return build_interpolant(g, cache, h, symmetric);
}

std::vector<double> quadrature(const IndexSet& g, SampleCache& cache, const SpatialHierarchy& h,
                               const ParamSequence& params) {
  if (!g.all_even()) throw std::invalid_argument("quadrature: index set must lie in F_ev");
  // Streams weighted sums per term: the detail is linear, so
  // sum_p w_p delta_k(y_p) = S_k - P(S_{k-1}) with S_l = sum_p w_p v_l(y_p).
  const unsigned finest = g.max_level();
  std::map<unsigned, std::vector<double>> per_level;
  std::vector<double> y;
  for (const auto& ct : combination_terms(g, true)) {
    const std::size_t block = h.dim(ct.level);
    std::vector<double> fine(block, 0.0), coarse(ct.level > 0 ? h.dim(ct.level - 1) : 0, 0.0);
    const auto& support = ct.mu.entries();
    std::vector<const std::vector<double>*> wts;
    for (const auto& [d, v] : support) wts.push_back(&interpolatory_weights(params.at(d), v).weights);
    std::vector<std::size_t> idx(support.size(), 0);
    y.assign(ct.mu.max_dimension(), 0.0);
    const std::size_t npts = grid_size(ct.mu);
    for (std::size_t p = 0; p < npts; ++p) {
      double w = ct.coefficient;
      for (std::size_t i = 0; i < support.size(); ++i) w *= (*wts[i])[idx[i]];
      if (w != 0.0) {
        grid_point(ct.mu, p, y);
        const std::vector<double>& f = cache.get(y, ct.level);
        if (f.size() != block) throw std::runtime_error("quadrature: sampler returned wrong block size");
        for (std::size_t r = 0; r < block; ++r) fine[r] += w * f[r];
        if (ct.level > 0) {
          const std::vector<double>& c = cache.get(y, ct.level - 1);
          for (std::size_t r = 0; r < c.size(); ++r) coarse[r] += w * c[r];
        }
      }
      for (std::size_t i = support.size(); i-- > 0;) {
        if (++idx[i] <= support[i].second) break;
        idx[i] = 0;
      }
    }
    if (ct.level > 0) {
      const std::vector<double> pc = h.prolong(coarse, ct.level - 1, ct.level);
      for (std::size_t r = 0; r < block; ++r) fine[r] -= pc[r];
    }
    auto& acc = per_level[ct.level];
    if (acc.empty()) acc.assign(block, 0.0);
    for (std::size_t r = 0; r < block; ++r) acc[r] += fine[r];
  }
  std::vector<double> out(h.dim(finest), 0.0);
  for (const auto& [level, acc] : per_level) accumulate_prolonged(out, acc, level, finest, h);
  return out;
}

std::vector<double> quadrature(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                               const ParamSequence& params) {
  SampleCache cache(sampler);
  return quadrature(g, cache, h, params);
}

double functional_quadrature(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                             const ParamSequence& params, std::span<const double> phi) {
  const std::vector<double> q = quadrature(g, sampler, h, params);
  return h.pair(phi, q);
}

GpcExpansion truncation_projector(const IndexSet& g, const GpcSampler& gpc, const SpatialHierarchy& h) {
  std::map<MultiIndex, std::vector<unsigned>> levels;
  for (const auto& e : g.entries()) levels[e.nu].push_back(e.level);
  GpcExpansion out;
  for (const auto& [nu, ks] : levels) {
    const unsigned top = *std::max_element(ks.begin(), ks.end());
    std::vector<double> acc(h.dim(top), 0.0);
    for (unsigned k : ks) {
      const std::vector<double> d = detail(h, k, [&](unsigned l) { return gpc(nu, l); });
      accumulate_prolonged(acc, d, k, top, h);
    }
    out.emplace(nu, std::make_pair(top, std::move(acc)));
  }
  return out;
}

}  // namespace sgq
