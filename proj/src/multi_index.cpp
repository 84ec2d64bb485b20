#include "sgq/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sgq {

MultiIndex::MultiIndex(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first == 0) throw std::invalid_argument("MultiIndex: dimensions are 1-based");
    if (i > 0 && entries[i].first == entries[i - 1].first)
      throw std::invalid_argument("MultiIndex: duplicate dimension");
    if (entries[i].second != 0) entries_.push_back(entries[i]);
  }
}

MultiIndex MultiIndex::unit(std::uint32_t dim, std::uint32_t order) {
  return MultiIndex({{dim, order}});
}

std::uint32_t MultiIndex::operator[](std::uint32_t dim) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{dim, 0});
  return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

void MultiIndex::set(std::uint32_t dim, std::uint32_t order) {
  if (dim == 0) throw std::invalid_argument("MultiIndex: dimensions are 1-based");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{dim, 0});
  if (it != entries_.end() && it->first == dim) {
    if (order == 0)
      entries_.erase(it);
    else
      it->second = order;
  } else if (order != 0) {
    entries_.insert(it, Entry{dim, order});
  }
}

MultiIndex MultiIndex::with(std::uint32_t dim, std::uint32_t order) const {
  MultiIndex out = *this;
  out.set(dim, order);
  return out;
}

std::uint32_t MultiIndex::max_order() const {
  std::uint32_t m = 0;
  for (const auto& [d, v] : entries_) m = std::max(m, v);
  return m;
}

std::uint32_t MultiIndex::total_order() const {
  std::uint32_t s = 0;
  for (const auto& [d, v] : entries_) s += v;
  return s;
}

bool MultiIndex::is_even() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second % 2 == 0; });
}

bool MultiIndex::is_below(const MultiIndex& other) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.second <= other[e.first]; });
}

std::string MultiIndex::to_string() const {
  if (entries_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ' ';
    os << entries_[i].first << ':' << entries_[i].second;
  }
  return os.str();
}

MultiIndex MultiIndex::parse(const std::string& text) {
  std::istringstream is(text);
  std::vector<Entry> entries;
  std::string tok;
  while (is >> tok) {
    if (tok == "0") continue;
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("MultiIndex::parse: bad token '" + tok + "'");
    entries.emplace_back(static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
                         static_cast<std::uint32_t>(std::stoul(tok.substr(colon + 1))));
  }
  return MultiIndex(std::move(entries));
}

double p_weight(const MultiIndex& nu, double theta, double lambda) {
  if (theta < 0.0 || lambda < 0.0) throw std::invalid_argument("p_weight: theta and lambda must be >= 0");
  double w = 1.0;
  for (const auto& [d, v] : nu.entries()) w *= std::pow(1.0 + lambda * v, theta);
  return w;
}

bool is_downward_closed(const std::vector<MultiIndex>& set, bool even) {
  const std::set<MultiIndex> members(set.begin(), set.end());
  const std::uint32_t step = even ? 2 : 1;
  for (const auto& nu : members) {
    if (even && !nu.is_even()) return false;
    for (const auto& [d, v] : nu.entries()) {
      if (!members.contains(nu.with(d, v >= step ? v - step : 0))) return false;
    }
  }
  return true;
}

double RhoSequence::log_at(std::size_t dim) const {
  if (!is_active(dim)) return std::numeric_limits<double>::infinity();
  if (dim >= 1 && dim <= values.size()) return std::log(values[dim - 1]);
  return std::log(scale) + exponent * std::log(static_cast<double>(dim) + shift);
}

double RhoSequence::at(std::size_t dim) const { return std::exp(log_at(dim)); }

void RhoSequence::validate() const {
  if (!(exponent >= 0.0)) throw std::invalid_argument("RhoSequence: exponent must be >= 0");
  if (!(shift >= 0.0)) throw std::invalid_argument("RhoSequence: shift must be >= 0");
  for (double v : values)
    if (!(v > 1.0)) throw std::invalid_argument("RhoSequence: every rho_j must exceed 1");
  const std::size_t first_closed = values.size() + 1;
  if (is_active(first_closed) && !(log_at(first_closed) > 0.0))
    throw std::invalid_argument("RhoSequence: rho_j must exceed 1");
}

WeightFamily WeightFamily::sigma(RhoSequence rho, ParamSequence params) {
  WeightFamily w;
  w.rho = rho;
  w.params = std::move(params);
  return w;
}

WeightFamily WeightFamily::p_family(double theta, double lambda) {
  WeightFamily w;
  w.rho_power = 0.0;
  w.jacobi_constants = false;
  w.theta = theta;
  w.lambda = lambda;
  return w;
}

double WeightFamily::log_factor(std::size_t dim, std::uint32_t order) const {
  if (order == 0) return 0.0;
  double s = 0.0;
  if (rho_power != 0.0) {
    const double lr = rho.log_at(dim);
    if (std::isinf(lr)) return lr;
    s += rho_power * order * lr;
  } else if (!rho.is_active(dim)) {
    return std::numeric_limits<double>::infinity();
  }
  if (jacobi_constants) s += log_normalization_constant(params.at(dim), order);
  if (theta != 0.0) s += theta * std::log1p(lambda * order);
  return s;
}

double WeightFamily::log_weight(const MultiIndex& nu) const {
  double s = std::log(base);
  for (const auto& [d, v] : nu.entries()) s += log_factor(d, v);
  return s;
}

double WeightFamily::weight(const MultiIndex& nu) const { return std::exp(log_weight(nu)); }

void WeightFamily::validate() const {
  if (rho_power != 0.0) rho.validate();
  if (rho_power < 0.0) throw std::invalid_argument("WeightFamily: rho_power must be >= 0");
  if (theta < 0.0 || lambda < 0.0) throw std::invalid_argument("WeightFamily: theta, lambda must be >= 0");
  if (!(base >= 1.0)) throw std::invalid_argument("WeightFamily: base weight must be >= 1");
}

double sigma_weight(const MultiIndex& nu, const WeightFamily& w) { return w.weight(nu); }
double log_sigma_weight(const MultiIndex& nu, const WeightFamily& w) { return w.log_weight(nu); }

}  // namespace sgq
