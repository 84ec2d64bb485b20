// Fully discrete sparse-grid interpolation and quadrature.
#pragma once

#include "sgq/index_set.hpp"
#include "sgq/jacobi.hpp"
#include "sgq/spatial.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace sgq {

/// v(y) projected to level k: coefficients in V_{2^k}. y is dense over
/// dimensions 1..y.size(); missing dimensions are zero.
using Sampler = std::function<std::vector<double>(std::span<const double> y, unsigned level)>;

/// Memoizes a sampler on (level, quantized nonzero coordinates).
class SampleCache {
 public:
  explicit SampleCache(Sampler sampler) : sampler_(std::move(sampler)) {}

  /// The returned reference stays valid for the cache's lifetime.
  const std::vector<double>& get(std::span<const double> y, unsigned level);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  using Key = std::pair<unsigned, std::vector<std::pair<std::uint32_t, std::int64_t>>>;
  Sampler sampler_;
  std::map<Key, std::vector<double>> store_;
  std::size_t hits_ = 0, misses_ = 0;
  std::mutex mu_;
};

/// (k, mu, c): one full-tensor interpolant I_mu applied to the detail at
/// level k, with integer coefficient c from expanding the increments.
struct CombinationTerm {
  unsigned level = 0;
  MultiIndex mu;
  double coefficient = 0.0;
};

/// Expands sum over G of delta_k (x) Delta_nu into full-tensor terms by
/// inclusion-exclusion (step 2 per dimension when `symmetric`) and merges
/// equal (k, mu) pairs; zero coefficients are dropped. Sorted by (k, mu).
/// Throws std::invalid_argument for odd indices under `symmetric`.
std::vector<CombinationTerm> combination_terms(const IndexSet& g, bool symmetric);

/// Number of tensor grid points of I_mu: prod_j (mu_j + 1).
std::size_t grid_size(const MultiIndex& mu);

/// The grid point with flat index `flat` (last support dimension fastest),
/// written densely into y (resized to at least mu.max_dimension()).
void grid_point(const MultiIndex& mu, std::size_t flat, std::vector<double>& y);

struct SurrogateTerm {
  unsigned level = 0;
  MultiIndex mu;
  double coefficient = 0.0;
  /// grid_size(mu) blocks of dim V_{2^level} detail coefficients, row-major.
  std::vector<double> blocks;
};

struct SurrogateStats {
  std::size_t grid_points = 0;     // sum of grid sizes over terms
  std::size_t distinct_points = 0;  // distinct (point, level) detail requests
  std::size_t sampler_calls = 0;    // cache misses
  std::size_t cache_hits = 0;
};

/// I_G v (or I*_G v) as stored combination terms. Immutable once built.
class SparseSurrogate {
 public:
  std::vector<SurrogateTerm> terms;
  IndexSet provenance;
  bool symmetric = false;
  unsigned finest_level = 0;
  std::size_t block_dim_finest = 0;
  SurrogateStats stats;

  /// Value at y (dense over dimensions 1..y.size()), in V_{2^finest}.
  std::vector<double> evaluate(std::span<const double> y, const SpatialHierarchy& h) const;
  /// Closed-form integral against the product Jacobi measure via Q_mu.
  std::vector<double> integrate(const ParamSequence& params, const SpatialHierarchy& h) const;
};

/// Builds I_G v (I*_G v when `symmetric`) with details
/// delta_k = sample(k) - prolong(sample(k-1)), delta_0 = sample(0).
SparseSurrogate build_interpolant(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                                  bool symmetric);
/// Same, sharing an external cache across calls.
SparseSurrogate build_interpolant(const IndexSet& g, SampleCache& cache, const SpatialHierarchy& h,
                                  bool symmetric);

/// Q_G v = integral of I*_G v; rejects non-even G.
std::vector<double> quadrature(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                               const ParamSequence& params);
std::vector<double> quadrature(const IndexSet& g, SampleCache& cache, const SpatialHierarchy& h,
                               const ParamSequence& params);

/// <phi, Q_G v>, phi given as a coefficient vector at the finest level of G.
double functional_quadrature(const IndexSet& g, const Sampler& sampler, const SpatialHierarchy& h,
                             const ParamSequence& params, std::span<const double> phi);

/// P_{2^k}(v_nu), the level-k projection of the GPC coefficient v_nu.
using GpcSampler = std::function<std::vector<double>(const MultiIndex& nu, unsigned level)>;

/// nu -> (level K, sum over {k : (k, nu) in G} of delta_k(v_nu) at level K),
/// K the largest such k.
using GpcExpansion = std::map<MultiIndex, std::pair<unsigned, std::vector<double>>>;

/// S_G v.
GpcExpansion truncation_projector(const IndexSet& g, const GpcSampler& gpc, const SpatialHierarchy& h);

}  // namespace sgq
