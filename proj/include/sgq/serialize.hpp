// JSON export and import of sparse quadrature rules and surrogates.
#pragma once

#include "sgq/index_set.hpp"
#include "sgq/jacobi.hpp"
#include "sgq/sparse.hpp"

#include <string>
#include <vector>

namespace sgq {

/// One full-tensor term: points over the support dimensions `dims` of mu,
/// each with the signed weight coefficient * prod_j omega_{mu_j, i_j}.
struct ExportedTerm {
  unsigned level = 0;
  MultiIndex mu;
  double coefficient = 0.0;
  std::vector<std::uint32_t> dims;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  /// Detail coefficients (surrogates only), points.size() blocks.
  std::vector<double> blocks;
};

struct ExportedRule {
  ParamSequence params;
  IndexSet set;
  bool symmetric = true;
  std::vector<ExportedTerm> terms;
};

/// The quadrature rule Q_G (or the integral of I_G when not `symmetric`) as
/// level-tagged points and weights: Q_G v = sum over terms and points of
/// weight * delta_level(v(point)).
ExportedRule make_rule(const IndexSet& g, const ParamSequence& params, bool symmetric = true);
/// Same layout, with the stored detail blocks attached.
ExportedRule make_rule(const SparseSurrogate& s, const ParamSequence& params);

std::string export_rule(const ExportedRule& r);
ExportedRule import_rule(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace sgq
