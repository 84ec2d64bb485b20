// Thresholded sets of (spatial level, multi-index) pairs and the search for
// the threshold that fits a given budget.
#pragma once

#include "sgq/multi_index.hpp"
#include "sgq/spatial.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sgq {

/// Which thresholded family to build.
///  kFull:           G(xi) over all of F (plain interpolation)
///  kEven:           G_ev(xi), same thresholds restricted to F_ev
///  kEvenQuadrature: the quadrature-adapted even set with halved exponents
enum class SetVariant { kFull, kEven, kEvenQuadrature };

std::string to_string(SetVariant v);
SetVariant parse_set_variant(const std::string& s);

struct ThresholdConfig {
  SetVariant variant = SetVariant::kFull;
  double alpha = 1.0;  // spatial convergence rate
  double q1 = 1.0;
  double q2 = 1.0;
  WeightFamily sigma1;
  WeightFamily sigma2;

  /// Throws std::invalid_argument on q1 > q2, q1 >= 2 (>= 4 for the
  /// quadrature variant), a q2 that leaves tau undefined, or alpha <= 0.
  void validate() const;

  bool even() const { return variant != SetVariant::kFull; }
  /// alpha > 1/q2 - 1/2 (alpha > 2/q2 - 1/2 for the quadrature variant).
  bool high_regularity() const;
  double tau() const;
  double vartheta() const;
  double eta() const;
  /// Smallest admissible threshold: 1 in the low-regularity branch, e in the
  /// high-regularity branch where the factor (log xi)^eta appears.
  double min_xi() const;
};

struct IndexEntry {
  unsigned level = 0;
  MultiIndex nu;

  friend auto operator<=>(const IndexEntry&, const IndexEntry&) = default;
  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// A finite set of (k, nu) pairs sorted lexicographically in (k, nu).
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<IndexEntry> entries);

  const std::vector<IndexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(unsigned level, const MultiIndex& nu) const;
  /// Lambda_k = { nu : (k, nu) in G }.
  std::vector<MultiIndex> slice(unsigned level) const;
  unsigned max_level() const;
  /// Largest dimension appearing in any multi-index.
  std::uint32_t max_dimension() const;
  bool all_even() const;

  /// Each slice downward closed (in F_ev when `even`) and slices nested
  /// decreasingly in k.
  bool has_threshold_structure(bool even) const;

  /// One line per entry: "k j1:v1 j2:v2 ..." ("k" alone for the zero index).
  std::string to_text() const;
  static IndexSet from_text(const std::string& text);

  std::optional<ThresholdConfig> config;
  double xi = std::numeric_limits<double>::quiet_NaN();

 private:
  std::vector<IndexEntry> entries_;
};

/// Enumerates the thresholded set for `cfg` at threshold `xi` by depth-first
/// search over dimensions, relying on weights increasing in every order.
/// Throws std::runtime_error if dimension 10^6 is reached with admissible
/// entries still appearing.
IndexSet enumerate_threshold_set(const ThresholdConfig& cfg, double xi);

/// Sum over entries of dim V_{2^k}.
std::size_t dim_of_set(const IndexSet& set, const SpatialHierarchy& h);

struct BudgetSelection {
  double xi = 0.0;
  IndexSet set;
  std::size_t dim = 0;
};

/// Largest xi on a fixed dyadic lattice in log xi with dim_of_set <= budget.
/// Lattices are shared across budgets, so xi is monotone in the budget.
BudgetSelection select_xi_for_budget(const ThresholdConfig& cfg, const SpatialHierarchy& h,
                                     std::size_t budget);

}  // namespace sgq
