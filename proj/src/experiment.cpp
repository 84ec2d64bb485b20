#include "sgq/experiment.hpp"

#include "sgq/interp1d.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sgq {

using nlohmann::json;

std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::kInterp: return "interp";
    case StudyKind::kInterpSym: return "interp-sym";
    case StudyKind::kQuad: return "quad";
  }
  return "?";
}

StudyKind parse_study_kind(const std::string& s) {
  if (s == "interp") return StudyKind::kInterp;
  if (s == "interp-sym") return StudyKind::kInterpSym;
  if (s == "quad") return StudyKind::kQuad;
  throw std::invalid_argument("unknown study '" + s + "' (interp, interp-sym, quad)");
}

// ---------------------------------------------------------------------------
// ExperimentConfig

void ExperimentConfig::validate() const {
  if (budgets.empty()) throw std::invalid_argument("config: budgets must not be empty");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1]) throw std::invalid_argument("config: budgets must be strictly increasing");
  if (budgets.front() == 0) throw std::invalid_argument("config: budgets must be positive");
  if (study != StudyKind::kQuad) {
    if (!error.seed) throw std::invalid_argument("config: error.seed is required for Monte Carlo error estimates");
    if (error.mc_samples < 100) throw std::invalid_argument("config: error.mc_samples must be at least 100");
  }
  if (study != StudyKind::kInterp && !params.symmetric())
    throw std::invalid_argument("config: symmetric studies need a_j == b_j in every dimension");
  if (error.reference != "tensor" && error.reference != "sparse")
    throw std::invalid_argument("config: error.reference must be 'tensor' or 'sparse'");
  if (error.reference == "sparse" && error.reference_budget == 0)
    throw std::invalid_argument("config: error.reference_budget is required for the sparse reference");
  if (model == ModelKind::kPde)
    pde.validate();
  else
    holo.validate();
  threshold_config().validate();
}

SetVariant ExperimentConfig::variant() const {
  switch (study) {
    case StudyKind::kInterp: return SetVariant::kFull;
    case StudyKind::kInterpSym: return SetVariant::kEven;
    case StudyKind::kQuad: return SetVariant::kEvenQuadrature;
  }
  return SetVariant::kFull;
}

ThresholdConfig ExperimentConfig::threshold_config() const {
  if (model == ModelKind::kPde) {
    PdeRecipeParams r = pde_recipe;
    r.variant = variant();
    return build_weight_recipe(pde, r, params).config(variant(), alpha);
  }
  HoloRecipeParams r = holo_recipe;
  r.kappa = study == StudyKind::kQuad ? 2 : 1;
  return build_weight_recipe(holo, r).config(variant(), alpha);
}

Sampler ExperimentConfig::sampler() const {
  return model == ModelKind::kPde ? pde_sampler(pde) : holo_sampler(holo);
}

std::unique_ptr<SpatialHierarchy> ExperimentConfig::hierarchy() const {
  if (model == ModelKind::kPde) return std::make_unique<Fem1D>();
  return std::make_unique<ScalarHierarchy>();
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

JacobiParam read_param(const json& j) {
  JacobiParam p;
  read(j, "a", p.a);
  read(j, "b", p.b);
  p.validate();
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    const json& m = j.at("model");
    const std::string type = m.at("type").get<std::string>();
    if (type == "pde") {
      c.model = ModelKind::kPde;
      double total = 0.9, decay = 2.0;
      std::size_t active = 16;
      read(m, "total", total);
      read(m, "decay", decay);
      read(m, "active", active);
      c.pde = AffineDiffusion::with_total(total, decay, active);
      read(m, "abar", c.pde.abar);
      read(m, "load", c.pde.load);
      // A full tensor rule is out of reach in 16 dimensions.
      c.error.reference = "sparse";
      c.error.reference_budget = 300;
    } else if (type == "holomorphic") {
      c.model = ModelKind::kHolomorphic;
      read(m, "c0", c.holo.c0);
      read(m, "amplitude", c.holo.amplitude);
      read(m, "decay", c.holo.decay);
      read(m, "active", c.holo.active);
      c.alpha = 50.0;
    } else {
      throw std::invalid_argument("config: model.type must be 'pde' or 'holomorphic'");
    }

    if (j.contains("measure")) {
      const json& mj = j.at("measure");
      std::vector<JacobiParam> leading;
      if (mj.contains("leading"))
        for (const auto& e : mj.at("leading")) leading.push_back(read_param(e));
      c.params = ParamSequence(std::move(leading), read_param(mj));
    }

    c.study = parse_study_kind(j.value("study", std::string("quad")));
    c.budgets = j.at("budgets").get<std::vector<std::size_t>>();
    read(j, "alpha", c.alpha);
    read(j, "record_time", c.record_time);

    const json w = j.value("weights", json::object());
    if (c.model == ModelKind::kPde) {
      if (w.contains("rho1")) {
        read(w.at("rho1"), "scale", c.pde_recipe.rho1_scale);
        read(w.at("rho1"), "exponent", c.pde_recipe.rho1_exponent);
      }
      if (w.contains("rho2")) {
        read(w.at("rho2"), "scale", c.pde_recipe.rho2_scale);
        read(w.at("rho2"), "exponent", c.pde_recipe.rho2_exponent);
      }
      read(w, "q1", c.pde_recipe.q1);
      read(w, "q2", c.pde_recipe.q2);
      read(w, "truncate", c.pde_recipe.truncate);
    } else {
      const PWeightDefaults d = default_p_weight(c.params);
      c.holo_recipe.theta = d.theta;
      c.holo_recipe.lambda = d.lambda;
      // q = 2p/(2 - p/kappa) must stay below 2 when kappa = 1.
      if (c.study != StudyKind::kQuad) c.holo_recipe.p = 0.5;
      read(w, "p", c.holo_recipe.p);
      read(w, "theta", c.holo_recipe.theta);
      read(w, "lambda", c.holo_recipe.lambda);
      read(w, "share", c.holo_recipe.share);
      read(w, "share_exponent", c.holo_recipe.share_exponent);
    }

    const json e = j.value("error", json::object());
    read(e, "mc_samples", c.error.mc_samples);
    if (e.contains("seed")) c.error.seed = e.at("seed").get<std::uint64_t>();
    read(e, "reference_level", c.error.reference_level);
    read(e, "reference", c.error.reference);
    read(e, "reference_order", c.error.reference_order);
    read(e, "reference_budget", c.error.reference_budget);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sampling and references

std::vector<std::vector<double>> sample_measure(const ParamSequence& params, std::size_t active, std::size_t count,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(active));
  for (auto& y : out) {
    for (std::size_t j = 1; j <= active; ++j) {
      const JacobiParam& p = params.at(j);
      std::gamma_distribution<double> gx(p.b + 1.0, 1.0), gy(p.a + 1.0, 1.0);
      const double x = gx(rng), z = gy(rng);
      y[j - 1] = 2.0 * x / (x + z) - 1.0;
    }
  }
  return out;
}

namespace {

// Every level is the same space: the sparse construction then acts on the
// parameter only, with the spatial discretization frozen at one level.
class FrozenHierarchy final : public SpatialHierarchy {
 public:
  FrozenHierarchy(const SpatialHierarchy& base, unsigned level) : base_(base), level_(level) {}
  std::size_t dim(unsigned) const override { return base_.dim(level_); }
  std::vector<double> prolong(std::span<const double> c, unsigned, unsigned) const override {
    return {c.begin(), c.end()};
  }
  double norm(std::span<const double> c, unsigned) const override { return base_.norm(c, level_); }
  std::string name() const override { return "frozen-" + base_.name(); }

 private:
  const SpatialHierarchy& base_;
  unsigned level_;
};

// Counts only level-zero entries, so a budget bounds the parametric slice.
class LevelZeroCounter final : public SpatialHierarchy {
 public:
  std::size_t dim(unsigned level) const override { return level == 0 ? 1 : 0; }
  std::vector<double> prolong(std::span<const double> c, unsigned, unsigned) const override {
    return {c.begin(), c.end()};
  }
  double norm(std::span<const double> c, unsigned) const override { return c.empty() ? 0.0 : std::abs(c[0]); }
  std::string name() const override { return "level-zero"; }
};

unsigned effective_reference_level(const ExperimentConfig& cfg) {
  return cfg.model == ModelKind::kPde ? cfg.error.reference_level : 0;
}

}  // namespace

std::vector<double> reference_integral(const ExperimentConfig& cfg) {
  const Sampler v = cfg.sampler();
  const unsigned level = effective_reference_level(cfg);
  if (cfg.error.reference == "tensor") {
    std::vector<double> acc;
    tensor_gauss(cfg.params, cfg.active(), cfg.error.reference_order, [&](std::span<const double> y, double w) {
      const std::vector<double> val = v(y, level);
      if (acc.empty()) acc.assign(val.size(), 0.0);
      for (std::size_t i = 0; i < val.size(); ++i) acc[i] += w * val[i];
    });
    return acc;
  }
  // Parametric sparse quadrature with the spatial level frozen.
  if (!cfg.params.symmetric()) throw std::invalid_argument("sparse reference needs a symmetric measure");
  ThresholdConfig tc = cfg.threshold_config();
  tc.variant = SetVariant::kEvenQuadrature;
  const LevelZeroCounter counter;
  const BudgetSelection sel = select_xi_for_budget(tc, counter, cfg.error.reference_budget);
  std::vector<IndexEntry> slice;
  for (const auto& nu : sel.set.slice(0)) slice.push_back({0, nu});
  const auto h = cfg.hierarchy();
  const FrozenHierarchy frozen(*h, level);
  return quadrature(IndexSet(std::move(slice)), [&](std::span<const double> y, unsigned) { return v(y, level); },
                    frozen, cfg.params);
}

// ---------------------------------------------------------------------------
// ErrorEstimator

ErrorEstimator::ErrorEstimator(const ExperimentConfig& cfg)
    : cfg_(cfg), h_(cfg.hierarchy()), sampler_(cfg.sampler()), ref_level_(effective_reference_level(cfg)) {}

namespace {

double difference_norm(const SpatialHierarchy& h, const std::vector<double>& ref, unsigned ref_level,
                       const std::vector<double>& approx, unsigned level) {
  if (level > ref_level) {
    std::ostringstream os;
    os << "surrogate level " << level << " exceeds the reference level " << ref_level;
    throw std::runtime_error(os.str());
  }
  std::vector<double> a = h.prolong(approx, level, ref_level);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ref[i] - a[i];
  return h.norm(a, ref_level);
}

}  // namespace

std::pair<double, double> ErrorEstimator::interp_error(const SparseSurrogate& s) {
  if (points_.empty()) {
    auto points = sample_measure(cfg_.params, cfg_.active(), cfg_.error.mc_samples, cfg_.error.seed.value_or(0));
    std::vector<std::vector<double>> values;
    values.reserve(points.size());
    for (const auto& y : points) values.push_back(sampler_(y, ref_level_));
    points_ = std::move(points);
    values_ = std::move(values);
  }
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double e = difference_norm(*h_, values_[i], ref_level_, s.evaluate(points_[i], *h_), s.finest_level);
    sum += e * e;
    sum2 += e * e * e * e;
  }
  const double n = static_cast<double>(points_.size());
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 / n - mean * mean) * n / (n - 1.0));
  const double rms = std::sqrt(mean);
  // delta method: se(sqrt(m)) = se(m) / (2 sqrt(m))
  const double se = rms > 0.0 ? std::sqrt(var / n) / (2.0 * rms) : 0.0;
  return {rms, se};
}

const std::vector<double>& ErrorEstimator::reference_integral() {
  if (!integral_) integral_ = sgq::reference_integral(cfg_);
  return *integral_;
}

double ErrorEstimator::quad_error(const std::vector<double>& q, unsigned level) {
  return difference_norm(*h_, reference_integral(), ref_level_, q, level);
}

std::pair<double, double> estimate_interp_error(const SparseSurrogate& s, const ExperimentConfig& cfg) {
  ErrorEstimator est(cfg);
  return est.interp_error(s);
}

// ---------------------------------------------------------------------------
// Convergence runs

bool ResultTable::monotone(double k_stderr) const {
  const ResultRow* prev = nullptr;
  for (const auto& r : rows) {
    if (!r.failure.empty()) return false;
    if (prev && r.error > prev->error + k_stderr * std::max(r.stderr_, prev->stderr_)) return false;
    prev = &r;
  }
  return true;
}

ResultTable run_convergence(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const ThresholdConfig tc = cfg.threshold_config();
  const auto h = cfg.hierarchy();
  SampleCache cache(cfg.sampler());
  ErrorEstimator est(cfg);
  ResultTable table;

  for (std::size_t n : cfg.budgets) {
    ResultRow row;
    row.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const BudgetSelection sel = select_xi_for_budget(tc, *h, n);
      row.xi = sel.xi;
      row.dim = sel.dim;
      if (cfg.study == StudyKind::kQuad) {
        const std::vector<double> q = quadrature(sel.set, cache, *h, cfg.params);
        row.error = est.quad_error(q, sel.set.max_level());
      } else {
        const SparseSurrogate s = build_interpolant(sel.set, cache, *h, cfg.study == StudyKind::kInterpSym);
        std::tie(row.error, row.stderr_) = est.interp_error(s);
      }
      if (log)
        *log << "n=" << n << " dim=" << row.dim << " |G|=" << sel.set.size() << " levels<=" << sel.set.max_level()
             << " dims<=" << sel.set.max_dimension() << " error=" << row.error << " solves=" << cache.misses()
             << '\n';
    } catch (const std::exception& e) {
      row.failure = e.what();
      row.error = std::numeric_limits<double>::quiet_NaN();
      row.stderr_ = std::numeric_limits<double>::quiet_NaN();
      if (log) *log << "n=" << n << " failed: " << e.what() << '\n';
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cfg.record_time) row.seconds = secs;
    if (log) *log << "n=" << n << " seconds=" << secs << '\n';
    table.rows.push_back(std::move(row));
  }

  std::vector<double> ns, errs;
  for (const auto& r : table.rows) {
    if (r.failure.empty() && r.error > 0.0 && std::isfinite(r.error)) {
      ns.push_back(static_cast<double>(r.n));
      errs.push_back(r.error);
    }
  }
  if (ns.size() >= 2) {
    table.slope = fitted_slope(ns, errs);
    const std::size_t k = ns.size();
    table.terminal_slope = std::log(errs[k - 1] / errs[k - 2]) / std::log(ns[k - 1] / ns[k - 2]);
  } else {
    table.slope = table.terminal_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string export_table(const ResultTable& t) {
  std::string out = "n,dim,xi,error,stderr,seconds\n";
  for (const auto& r : t.rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.dim) + ',' + fmt17(r.xi) + ',' + fmt17(r.error) + ',' +
           fmt17(r.stderr_) + ',' + fmt17(r.seconds) + '\n';
  }
  return out;
}

void export_table(const ResultTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write table '" + path + "'");
  out << export_table(t);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

ResultTable import_table(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != "n,dim,xi,error,stderr,seconds")
    throw std::invalid_argument("import_table: missing header");
  ResultTable t;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[6];
    for (auto& s : f)
      if (!std::getline(ls, s, ',')) throw std::invalid_argument("import_table: short row '" + line + "'");
    ResultRow r;
    r.n = std::stoull(f[0]);
    r.dim = std::stoull(f[1]);
    r.xi = std::strtod(f[2].c_str(), nullptr);
    r.error = std::strtod(f[3].c_str(), nullptr);
    r.stderr_ = std::strtod(f[4].c_str(), nullptr);
    r.seconds = std::strtod(f[5].c_str(), nullptr);
    t.rows.push_back(r);
  }
  return t;
}

std::string export_summary(const ResultTable& t, const ExperimentConfig& cfg) {
  json j;
  j["study"] = to_string(cfg.study);
  j["model"] = cfg.model == ModelKind::kPde ? "pde" : "holomorphic";
  j["rows"] = t.rows.size();
  j["slope"] = std::isfinite(t.slope) ? json(t.slope) : json(nullptr);
  j["terminal_slope"] = std::isfinite(t.terminal_slope) ? json(t.terminal_slope) : json(nullptr);
  j["monotone"] = t.monotone(0.0);
  j["monotone_within_2se"] = t.monotone(2.0);
  json failures = json::array();
  for (const auto& r : t.rows)
    if (!r.failure.empty()) failures.push_back({{"n", r.n}, {"message", r.failure}});
  j["failures"] = failures;
  if (cfg.model == ModelKind::kPde) j["truncation_tail_amplitude"] = cfg.pde.tail_bound();
  return j.dump(2) + "\n";
}

}  // namespace sgq
