// Finitely supported multi-indices and the weight families that order them.
#pragma once

#include "sgq/jacobi.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sgq {

/// A finitely supported sequence of polynomial orders. Stored sparsely as
/// ascending (dimension, order) pairs with dimension >= 1 and order >= 1;
/// absent dimensions have order zero.
class MultiIndex {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  MultiIndex() = default;
  /// Canonicalizes: sorts by dimension, drops zero orders. Duplicate or
  /// zero dimensions throw std::invalid_argument.
  explicit MultiIndex(std::vector<Entry> entries);

  static MultiIndex unit(std::uint32_t dim, std::uint32_t order = 1);

  std::uint32_t operator[](std::uint32_t dim) const;
  void set(std::uint32_t dim, std::uint32_t order);
  MultiIndex with(std::uint32_t dim, std::uint32_t order) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::uint32_t max_order() const;
  std::uint32_t total_order() const;
  std::uint32_t max_dimension() const { return entries_.empty() ? 0 : entries_.back().first; }
  /// nu in F_ev: every order even.
  bool is_even() const;
  /// Componentwise nu <= other.
  bool is_below(const MultiIndex& other) const;

  /// "j1:v1 j2:v2 ..." or "0" for the zero index.
  std::string to_string() const;
  static MultiIndex parse(const std::string& text);

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Entry> entries_;
};

/// p_nu(theta, lambda) = prod_j (1 + lambda nu_j)^theta.
double p_weight(const MultiIndex& nu, double theta, double lambda);

/// True iff every nu' <= nu (stepping by one, or by two in the even lattice)
/// of every member is a member.
bool is_downward_closed(const std::vector<MultiIndex>& set, bool even);

/// rho_j = values[j-1] for j <= values.size(), otherwise the closed form
/// scale * (j + shift)^exponent. Dimensions past `active` are inactive
/// (rho_j = +inf); active == 0 means every dimension is active.
struct RhoSequence {
  double scale = 2.0;
  double exponent = 0.0;
  double shift = 0.0;
  std::size_t active = 0;
  std::vector<double> values;

  double log_at(std::size_t dim) const;
  double at(std::size_t dim) const;
  bool is_active(std::size_t dim) const { return active == 0 || dim <= active; }
  /// Throws std::invalid_argument unless every rho_j > 1 (checked on the
  /// explicit values and the closed form at j = values.size() + 1), with
  /// nonnegative exponent and shift.
  void validate() const;
};

/// sigma_nu = base * (rho^nu)^rho_power * [prod_j c_{nu_j}^{a_j,b_j}] * p_nu(theta, lambda).
///
/// The plain sigma family uses rho_power = 1, Jacobi constants on, theta = 0.
/// The p-weight family is rho_power = 0, no constants, theta/lambda set.
struct WeightFamily {
  RhoSequence rho;
  double rho_power = 1.0;
  bool jacobi_constants = true;
  double theta = 0.0;
  double lambda = 0.0;
  double base = 1.0;
  ParamSequence params;

  static WeightFamily sigma(RhoSequence rho, ParamSequence params = {});
  static WeightFamily p_family(double theta, double lambda);

  /// log of the factor contributed by order `order` in dimension `dim`.
  /// +inf for inactive dimensions.
  double log_factor(std::size_t dim, std::uint32_t order) const;
  double log_weight(const MultiIndex& nu) const;
  double weight(const MultiIndex& nu) const;
  void validate() const;
};

double sigma_weight(const MultiIndex& nu, const WeightFamily& w);
double log_sigma_weight(const MultiIndex& nu, const WeightFamily& w);

}  // namespace sgq
