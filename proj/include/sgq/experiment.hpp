// Convergence studies: configuration, error estimation and result tables.
#pragma once

#include "sgq/index_set.hpp"
#include "sgq/models.hpp"
#include "sgq/sparse.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sgq {

enum class ModelKind { kHolomorphic, kPde };
/// interp: I_G over G(xi); interp-sym: I*_G over G_ev(xi); quad: Q_G over
/// the quadrature-adapted even set.
enum class StudyKind { kInterp, kInterpSym, kQuad };

std::string to_string(StudyKind k);
StudyKind parse_study_kind(const std::string& s);

struct ErrorSettings {
  std::size_t mc_samples = 200;
  std::optional<std::uint64_t> seed;
  /// Spatial level of the reference solutions (PDE only).
  unsigned reference_level = 12;
  /// "tensor": full tensor Gauss-Jacobi of `reference_order` per dimension.
  /// "sparse": parametric sparse quadrature at `reference_level` whose index
  /// set is the level-0 slice with at most `reference_budget` indices.
  std::string reference = "tensor";  // the PDE model defaults to "sparse", budget 300
  unsigned reference_order = 20;
  std::size_t reference_budget = 0;
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kHolomorphic;
  HolomorphicModel holo;
  AffineDiffusion pde = AffineDiffusion::defaults();
  ParamSequence params;  // product Jacobi measure
  StudyKind study = StudyKind::kQuad;
  std::vector<std::size_t> budgets;
  double alpha = 1.0;
  PdeRecipeParams pde_recipe;
  HoloRecipeParams holo_recipe;
  ErrorSettings error;
  /// Record wall-clock seconds in the table (breaks byte-identical output).
  bool record_time = false;

  /// Throws std::invalid_argument on a malformed configuration.
  void validate() const;
  std::size_t active() const { return model == ModelKind::kPde ? pde.active : holo.active; }
  SetVariant variant() const;
  ThresholdConfig threshold_config() const;
  Sampler sampler() const;
  std::unique_ptr<SpatialHierarchy> hierarchy() const;
};

/// Parses the JSON configuration document (schema in README).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::size_t n = 0;
  std::size_t dim = 0;
  double xi = 0.0;
  double error = 0.0;
  double stderr_ = 0.0;
  double seconds = 0.0;
  std::string failure;  // empty on success
};

struct ResultTable {
  std::vector<ResultRow> rows;
  /// Least-squares log-log slope of error against n over successful rows.
  double slope = 0.0;
  /// Slope between the last two successful rows.
  double terminal_slope = 0.0;
  /// max over rows of error_{i+1} - error_i allowing `k` standard errors;
  /// negative or zero means non-increasing.
  bool monotone(double k_stderr = 0.0) const;
};

/// Visits the spatial-error-free reference data of a run. Shared across
/// budgets so that every row sees the same Monte Carlo points.
class ErrorEstimator {
 public:
  explicit ErrorEstimator(const ExperimentConfig& cfg);

  /// Root-mean-square X^1 error of the surrogate at the Monte Carlo points,
  /// and its standard error.
  std::pair<double, double> interp_error(const SparseSurrogate& s);
  /// X^1 norm of reference_integral - q (q at level `level`).
  double quad_error(const std::vector<double>& q, unsigned level);
  const std::vector<double>& reference_integral();
  unsigned reference_level() const { return ref_level_; }

 private:
  const ExperimentConfig& cfg_;
  std::unique_ptr<SpatialHierarchy> h_;
  Sampler sampler_;
  unsigned ref_level_ = 0;
  std::vector<std::vector<double>> points_;
  std::vector<std::vector<double>> values_;
  std::optional<std::vector<double>> integral_;
};

/// Draws y_j = 2 B_j - 1, B_j ~ Beta(b_j + 1, a_j + 1), j = 1..active.
std::vector<std::vector<double>> sample_measure(const ParamSequence& params, std::size_t active, std::size_t count,
                                                std::uint64_t seed);

/// sqrt(mean ||v(Y_i) - I_G v(Y_i)||^2) with its Monte Carlo standard error.
std::pair<double, double> estimate_interp_error(const SparseSurrogate& s, const ExperimentConfig& cfg);

/// The reference value of the integral of v (at the reference level).
std::vector<double> reference_integral(const ExperimentConfig& cfg);

ResultTable run_convergence(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// CSV with header n,dim,xi,error,stderr,seconds; doubles printed with %.17g.
std::string export_table(const ResultTable& t);
void export_table(const ResultTable& t, const std::string& path);
ResultTable import_table(const std::string& csv);

/// Summary JSON: slopes, monotonicity flags and the failures.
std::string export_summary(const ResultTable& t, const ExperimentConfig& cfg);

}  // namespace sgq
