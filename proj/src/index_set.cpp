#include "sgq/index_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sgq {

std::string to_string(SetVariant v) {
  switch (v) {
    case SetVariant::kFull: return "full";
    case SetVariant::kEven: return "even";
    case SetVariant::kEvenQuadrature: return "even-quadrature";
  }
  return "?";
}

SetVariant parse_set_variant(const std::string& s) {
  if (s == "full") return SetVariant::kFull;
  if (s == "even") return SetVariant::kEven;
  if (s == "even-quadrature") return SetVariant::kEvenQuadrature;
  throw std::invalid_argument("unknown set variant '" + s + "'");
}

// ---------------------------------------------------------------------------
// ThresholdConfig

namespace {

// Exponent scale: the quadrature variant works with q/2 throughout.
double qscale(SetVariant v) { return v == SetVariant::kEvenQuadrature ? 0.5 : 1.0; }

}  // namespace

void ThresholdConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(q1 > 0.0) || !(q1 <= q2)) throw std::invalid_argument("need 0 < q1 <= q2");
  const double cap = variant == SetVariant::kEvenQuadrature ? 4.0 : 2.0;
  if (!(q1 < cap)) {
    std::ostringstream os;
    os << "q1 must be below " << cap << " for the " << to_string(variant) << " variant";
    throw std::invalid_argument(os.str());
  }
  if (high_regularity() && !(q2 < cap)) {
    std::ostringstream os;
    os << "q2 must be below " << cap << " in the high-regularity branch (tau undefined)";
    throw std::invalid_argument(os.str());
  }
  sigma1.validate();
  sigma2.validate();
}

bool ThresholdConfig::high_regularity() const {
  return alpha > 1.0 / (qscale(variant) * q2) - 0.5;
}

double ThresholdConfig::tau() const {
  const double s = qscale(variant);
  return 2.0 * alpha / (2.0 - s * q2);
}

double ThresholdConfig::vartheta() const {
  const double s = qscale(variant);
  return 2.0 / (2.0 - s * q2) * (1.0 / (s * q1) - 0.5);
}

double ThresholdConfig::eta() const {
  const double s = qscale(variant);
  return 1.0 / (1.0 / (s * q1) - 0.5);
}

double ThresholdConfig::min_xi() const { return high_regularity() ? std::numbers::e : 1.0; }

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<IndexEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

bool IndexSet::contains(unsigned level, const MultiIndex& nu) const {
  return std::binary_search(entries_.begin(), entries_.end(), IndexEntry{level, nu});
}

std::vector<MultiIndex> IndexSet::slice(unsigned level) const {
  std::vector<MultiIndex> out;
  for (const auto& e : entries_)
    if (e.level == level) out.push_back(e.nu);
  return out;
}

unsigned IndexSet::max_level() const { return entries_.empty() ? 0 : entries_.back().level; }

std::uint32_t IndexSet::max_dimension() const {
  std::uint32_t d = 0;
  for (const auto& e : entries_) d = std::max(d, e.nu.max_dimension());
  return d;
}

bool IndexSet::all_even() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const IndexEntry& e) { return e.nu.is_even(); });
}

bool IndexSet::has_threshold_structure(bool even) const {
  std::set<MultiIndex> previous;
  for (unsigned k = 0; k <= max_level(); ++k) {
    const auto s = slice(k);
    if (!is_downward_closed(s, even)) return false;
    if (k > 0 && !std::all_of(s.begin(), s.end(), [&](const MultiIndex& nu) { return previous.contains(nu); }))
      return false;
    previous = std::set<MultiIndex>(s.begin(), s.end());
  }
  return true;
}

std::string IndexSet::to_text() const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    os << e.level;
    if (!e.nu.is_zero()) os << ' ' << e.nu.to_string();
    os << '\n';
  }
  return os.str();
}

IndexSet IndexSet::from_text(const std::string& text) {
  std::istringstream is(text);
  std::vector<IndexEntry> entries;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    unsigned level = 0;
    if (!(ls >> level)) throw std::invalid_argument("IndexSet::from_text: bad line '" + line + "'");
    std::string rest;
    std::getline(ls, rest);
    entries.push_back({level, MultiIndex::parse(rest)});
  }
  return IndexSet(std::move(entries));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

constexpr std::uint32_t kMaxDimension = 1'000'000;
constexpr std::size_t kMaxEntries = 20'000'000;

// Admissibility in log space:
//   nu admissible  iff  c1(nu) <= cap1  and  c2(nu) <= cap2
//   levels k = 0 .. floor((cap2 - c2(nu)) / level_cost)
// where c_i(nu) = scale_i * log sigma_i(nu).
struct Thresholds {
  double scale1 = 0.0;  // 0 disables the sigma1 constraint
  double cap1 = 0.0;
  double scale2 = 1.0;
  double cap2 = 0.0;
  double level_cost = std::numbers::ln2;
};

Thresholds thresholds_for(const ThresholdConfig& cfg, double xi) {
  const double s = qscale(cfg.variant);
  const double lx = std::log(xi);
  Thresholds t;
  if (!cfg.high_regularity()) {
    t.scale2 = s * cfg.q2;
    t.cap2 = lx;
    t.level_cost = std::numbers::ln2;
  } else {
    t.scale1 = s * cfg.q1;
    t.cap1 = lx + cfg.eta() * std::log(lx);
    t.scale2 = 1.0;
    t.cap2 = cfg.vartheta() * lx;
    t.level_cost = cfg.tau() * std::numbers::ln2;
  }
  return t;
}

bool within(double value, double cap) { return value <= cap + 1e-12 * std::max(1.0, std::abs(cap)); }

class Enumerator {
 public:
  // Visitor returns false to abort.
  using Visitor = std::function<bool(const MultiIndex&, unsigned max_level)>;

  Enumerator(const ThresholdConfig& cfg, double xi) : cfg_(cfg), t_(thresholds_for(cfg, xi)) {
    step_ = cfg.even() ? 2 : 1;
    // Beyond this dimension every per-dimension factor is nondecreasing in j.
    monotone_from_ = std::max({cfg.sigma1.params.explicit_count(), cfg.sigma2.params.explicit_count(),
                               cfg.sigma1.rho.values.size(), cfg.sigma2.rho.values.size()});
  }

  // Returns false if the visitor aborted.
  bool run(const Visitor& visit) {
    visit_ = &visit;
    MultiIndex root;
    const double c1 = t_.scale1 * cfg_.sigma1.log_weight(root);
    const double c2 = t_.scale2 * cfg_.sigma2.log_weight(root);
    if (t_.scale1 != 0.0 && !within(c1, t_.cap1)) return true;
    if (!within(c2, t_.cap2)) return true;
    return descend(root, 1, c1, c2);
  }

 private:
  double f1(std::uint32_t dim, std::uint32_t order) {
    return t_.scale1 == 0.0 ? 0.0 : t_.scale1 * cached(cache1_, cfg_.sigma1, dim, order);
  }
  double f2(std::uint32_t dim, std::uint32_t order) { return t_.scale2 * cached(cache2_, cfg_.sigma2, dim, order); }

  static double cached(std::vector<std::vector<double>>& cache, const WeightFamily& w, std::uint32_t dim,
                       std::uint32_t order) {
    if (cache.size() <= dim) cache.resize(dim + 1);
    auto& row = cache[dim];
    while (row.size() <= order) row.push_back(w.log_factor(dim, static_cast<std::uint32_t>(row.size())));
    return row[order];
  }

  unsigned levels_for(double c2) const {
    const double room = (t_.cap2 - c2) / t_.level_cost;
    const double k = std::floor(room + 1e-12 * std::max(1.0, std::abs(room)));
    // A tie within tolerance can leave room slightly negative.
    return k <= 0.0 ? 0u : static_cast<unsigned>(k);
  }

  bool descend(MultiIndex& nu, std::uint32_t first_dim, double c1, double c2) {
    if (++emitted_ > kMaxEntries) throw std::runtime_error("enumerate_threshold_set: more than 2e7 entries");
    if (!(*visit_)(nu, levels_for(c2))) return false;
    for (std::uint32_t j = first_dim;; ++j) {
      if (j >= kMaxDimension) {
        std::ostringstream os;
        os << "enumerate_threshold_set: weights still below threshold at dimension " << j
           << "; the weight sequence must grow without bound";
        throw std::runtime_error(os.str());
      }
      bool any = false;
      for (std::uint32_t v = step_;; v += step_) {
        const double d1 = f1(j, v), d2 = f2(j, v);
        if (std::isinf(d1) || std::isinf(d2)) break;
        if ((t_.scale1 != 0.0 && !within(c1 + d1, t_.cap1)) || !within(c2 + d2, t_.cap2)) break;
        any = true;
        nu.set(j, v);
        const bool go_on = descend(nu, j + 1, c1 + d1, c2 + d2);
        nu.set(j, 0);
        if (!go_on) return false;
      }
      if (!any && j > monotone_from_) {
        // An inactive or too-heavy dimension past the monotone point ends the scan.
        break;
      }
    }
    return true;
  }

  const ThresholdConfig& cfg_;
  Thresholds t_;
  std::uint32_t step_ = 1;
  std::size_t monotone_from_ = 0;
  std::size_t emitted_ = 0;
  const Visitor* visit_ = nullptr;
  std::vector<std::vector<double>> cache1_, cache2_;
};

void check_xi(const ThresholdConfig& cfg, double xi) {
  if (cfg.high_regularity() ? !(xi >= std::numbers::e) : !(xi > 1.0)) {
    std::ostringstream os;
    os << "threshold xi=" << xi << " below the admissible minimum " << cfg.min_xi();
    throw std::domain_error(os.str());
  }
}

}  // namespace

IndexSet enumerate_threshold_set(const ThresholdConfig& cfg, double xi) {
  cfg.validate();
  check_xi(cfg, xi);
  std::vector<IndexEntry> entries;
  Enumerator(cfg, xi).run([&](const MultiIndex& nu, unsigned kmax) {
    for (unsigned k = 0; k <= kmax; ++k) entries.push_back({k, nu});
    return true;
  });
  IndexSet set(std::move(entries));
  set.config = cfg;
  set.xi = xi;
  return set;
}

std::size_t dim_of_set(const IndexSet& set, const SpatialHierarchy& h) {
  std::size_t d = 0;
  for (const auto& e : set.entries()) d += h.dim(e.level);
  return d;
}

BudgetSelection select_xi_for_budget(const ThresholdConfig& cfg, const SpatialHierarchy& h, std::size_t budget) {
  cfg.validate();
  // Fixed lattice: log xi in [log min_xi, log min_xi + kWidth], 60 halvings.
  constexpr double kWidth = 128.0;
  constexpr int kIterations = 60;
  const double base = std::log(cfg.min_xi());

  auto fits = [&](double log_xi) {
    // The low branch excludes xi == 1 itself; nudge the lattice origin.
    double xi = std::exp(log_xi);
    if (!cfg.high_regularity() && !(xi > 1.0)) xi = std::nextafter(1.0, 2.0);
    if (cfg.high_regularity() && xi < std::numbers::e) xi = std::numbers::e;
    std::size_t d = 0;
    const bool complete = Enumerator(cfg, xi).run([&](const MultiIndex&, unsigned kmax) {
      for (unsigned k = 0; k <= kmax && d <= budget; ++k) d += h.dim(k);
      return d <= budget;
    });
    return complete && d <= budget;
  };
  auto xi_at = [&](double log_xi) {
    double xi = std::exp(log_xi);
    if (!cfg.high_regularity() && !(xi > 1.0)) xi = std::nextafter(1.0, 2.0);
    if (cfg.high_regularity() && xi < std::numbers::e) xi = std::numbers::e;
    return xi;
  };

  BudgetSelection out;
  if (!fits(base)) {
    out.xi = xi_at(base);
    out.set.config = cfg;
    out.set.xi = out.xi;
    return out;
  }
  double lo = base, hi = base + kWidth;
  if (fits(hi)) {
    lo = hi;
  } else {
    for (int it = 0; it < kIterations; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (fits(mid))
        lo = mid;
      else
        hi = mid;
    }
  }
  out.xi = xi_at(lo);
  out.set = enumerate_threshold_set(cfg, out.xi);
  out.dim = dim_of_set(out.set, h);
  return out;
}

}  // namespace sgq
