// sgq: convergence studies, rule export and self-tests.
#include "sgq/audits.hpp"
#include "sgq/experiment.hpp"
#include "sgq/serialize.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

int report(const std::vector<sgq::AuditResult>& results) {
  for (const auto& r : results)
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
  return sgq::all_passed(results) ? 0 : 1;
}

sgq::ExperimentConfig load(const std::string& path, const std::optional<std::uint64_t>& seed) {
  sgq::ExperimentConfig cfg = sgq::load_config(path);
  if (seed) cfg.error.seed = *seed;
  cfg.validate();
  return cfg;
}

int converge(const std::string& config, const std::optional<std::uint64_t>& seed, const std::string& out) {
  const sgq::ExperimentConfig cfg = load(config, seed);
  fs::create_directories(out);
  const sgq::ResultTable t = sgq::run_convergence(cfg, &std::cerr);
  sgq::export_table(t, (fs::path(out) / "results.csv").string());
  sgq::write_text_file((fs::path(out) / "summary.json").string(), sgq::export_summary(t, cfg));
  std::cout << sgq::export_table(t);
  if (!t.monotone(cfg.study == sgq::StudyKind::kQuad ? 0.0 : 2.0))
    std::cerr << "warning: error is not non-increasing across budgets\n";
  return report(sgq::audit_table(t, cfg));
}

int export_rule(const std::string& config, const std::optional<std::uint64_t>& seed, const std::string& out,
                std::optional<std::size_t> budget, bool with_blocks) {
  const sgq::ExperimentConfig cfg = load(config, seed);
  const std::size_t n = budget.value_or(cfg.budgets.back());
  const auto h = cfg.hierarchy();
  const sgq::BudgetSelection sel = sgq::select_xi_for_budget(cfg.threshold_config(), *h, n);
  const bool symmetric = cfg.study != sgq::StudyKind::kInterp;
  sgq::ExportedRule rule;
  if (with_blocks) {
    const sgq::SparseSurrogate s = sgq::build_interpolant(sel.set, cfg.sampler(), *h, symmetric);
    rule = sgq::make_rule(s, cfg.params);
  } else {
    rule = sgq::make_rule(sel.set, cfg.params, symmetric);
  }
  rule.set.xi = sel.xi;
  fs::create_directories(out);
  const fs::path path = fs::path(out) / "rule.json";
  sgq::write_text_file(path.string(), sgq::export_rule(rule));
  std::cerr << "wrote " << path.string() << ": " << rule.terms.size() << " terms, xi=" << sel.xi
            << ", dim=" << sel.dim << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully discrete sparse-grid interpolation and quadrature"};
  app.require_subcommand(1);

  std::string config, out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  bool with_blocks = false;

  auto* conv = app.add_subcommand("converge", "Run a convergence study; writes results.csv and summary.json");
  conv->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  conv->add_option("--seed", seed, "Overrides error.seed");
  conv->add_option("--out", out, "Output directory");

  auto* rule = app.add_subcommand("export-rule", "Write the sparse rule for one budget as rule.json");
  rule->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  rule->add_option("--seed", seed, "Overrides error.seed");
  rule->add_option("--out", out, "Output directory");
  rule->add_option("--budget", budget, "Budget n (default: the last configured budget)");
  rule->add_flag("--with-blocks", with_blocks, "Sample the model and attach detail coefficients");

  std::uint64_t audit_seed = 1;
  auto* self = app.add_subcommand("selftest", "Run the library audit suite");
  self->add_option("--seed", audit_seed, "Seed for the randomized audits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*conv) return converge(config, seed, out);
    if (*rule) return export_rule(config, seed, out, budget, with_blocks);
    if (*self) return report(sgq::run_library_audits(audit_seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
