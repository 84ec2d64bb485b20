#include "sgq/serialize.hpp"

#include "sgq/quad1d.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sgq {

using nlohmann::json;

namespace {

ExportedTerm expand_term(unsigned level, const MultiIndex& mu, double coefficient, const ParamSequence& params) {
  ExportedTerm t;
  t.level = level;
  t.mu = mu;
  t.coefficient = coefficient;
  for (const auto& [d, v] : mu.entries()) t.dims.push_back(d);
  const std::size_t npts = grid_size(mu);
  std::vector<double> y;
  for (std::size_t p = 0; p < npts; ++p) {
    y.assign(mu.max_dimension(), 0.0);
    grid_point(mu, p, y);
    std::vector<double> pt;
    double w = coefficient;
    std::size_t flat = p;
    const auto& support = mu.entries();
    std::vector<std::size_t> idx(support.size());
    for (std::size_t i = support.size(); i-- > 0;) {
      idx[i] = flat % (support[i].second + 1);
      flat /= support[i].second + 1;
    }
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto [d, v] = support[i];
      pt.push_back(y[d - 1]);
      w *= interpolatory_weights(params.at(d), v).weights[idx[i]];
    }
    t.points.push_back(std::move(pt));
    t.weights.push_back(w);
  }
  return t;
}

json param_json(const JacobiParam& p) { return {{"a", p.a}, {"b", p.b}}; }

JacobiParam param_from(const json& j) { return {j.at("a").get<double>(), j.at("b").get<double>()}; }

}  // namespace

ExportedRule make_rule(const IndexSet& g, const ParamSequence& params, bool symmetric) {
  ExportedRule r;
  r.params = params;
  r.set = g;
  r.symmetric = symmetric;
  for (const auto& ct : combination_terms(g, symmetric))
    r.terms.push_back(expand_term(ct.level, ct.mu, ct.coefficient, params));
  return r;
}

ExportedRule make_rule(const SparseSurrogate& s, const ParamSequence& params) {
  ExportedRule r;
  r.params = params;
  r.set = s.provenance;
  r.symmetric = s.symmetric;
  for (const auto& st : s.terms) {
    ExportedTerm t = expand_term(st.level, st.mu, st.coefficient, params);
    t.blocks = st.blocks;
    r.terms.push_back(std::move(t));
  }
  return r;
}

std::string export_rule(const ExportedRule& r) {
  json j;
  j["format"] = "sgq-rule/1";
  json leading = json::array();
  for (const auto& p : r.params.leading()) leading.push_back(param_json(p));
  j["measure"] = {{"leading", leading}, {"fallback", param_json(r.params.fallback())}};
  j["symmetric"] = r.symmetric;
  j["index_set"] = r.set.to_text();
  if (!std::isnan(r.set.xi)) j["xi"] = r.set.xi;
  json terms = json::array();
  for (const auto& t : r.terms) {
    json jt;
    jt["level"] = t.level;
    jt["mu"] = t.mu.to_string();
    jt["coefficient"] = t.coefficient;
    jt["dims"] = t.dims;
    jt["points"] = t.points;
    jt["weights"] = t.weights;
    if (!t.blocks.empty()) jt["blocks"] = t.blocks;
    terms.push_back(std::move(jt));
  }
  j["terms"] = std::move(terms);
  return j.dump(1) + "\n";
}

ExportedRule import_rule(const std::string& text) {
  ExportedRule r;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "sgq-rule/1") throw std::invalid_argument("import_rule: unknown format");
    std::vector<JacobiParam> leading;
    for (const auto& p : j.at("measure").at("leading")) leading.push_back(param_from(p));
    r.params = ParamSequence(std::move(leading), param_from(j.at("measure").at("fallback")));
    r.symmetric = j.at("symmetric").get<bool>();
    r.set = IndexSet::from_text(j.at("index_set").get<std::string>());
    if (j.contains("xi")) r.set.xi = j.at("xi").get<double>();
    for (const auto& jt : j.at("terms")) {
      ExportedTerm t;
      t.level = jt.at("level").get<unsigned>();
      t.mu = MultiIndex::parse(jt.at("mu").get<std::string>());
      t.coefficient = jt.at("coefficient").get<double>();
      t.dims = jt.at("dims").get<std::vector<std::uint32_t>>();
      t.points = jt.at("points").get<std::vector<std::vector<double>>>();
      t.weights = jt.at("weights").get<std::vector<double>>();
      if (jt.contains("blocks")) t.blocks = jt.at("blocks").get<std::vector<double>>();
      r.terms.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("import_rule: ") + e.what());
  }
  return r;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace sgq
