#pragma once

#include <json.hpp>
#include <string>

#include "causets/amplitude.hpp"
#include "causets/einstein.hpp"
#include "causets/qmeasure.hpp"

namespace causets {

using Json = nlohmann::ordered_json;

inline Json causet_json(const Causet& c) {
  Json covers = Json::array();
  for (auto [i, j] : c.cover_edges()) covers.push_back(Json::array({i, j}));
  return Json{{"size", c.size()},
              {"covers", covers},
              {"canonical", c.code_hex()},
              {"h", c.height()},
              {"w", c.width()},
              {"area", c.area()}};
}

inline Json check_json(const CheckResult& c) {
  Json j{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

inline Json mu_sequence_json(const MuSequence& seq) {
  Json values = Json::array();
  for (std::size_t k = 0; k < seq.values.size(); ++k)
    values.push_back(Json::array({seq.first_level + static_cast<int>(k), seq.values[k]}));
  Json j{{"spec", seq.spec}, {"values", values}, {"converged", seq.converged}};
  if (seq.limit_estimate) j["limit_estimate"] = *seq.limit_estimate;
  return j;
}

/// Transition-table file format: a list of {parent, child, re, im} records
/// keyed by causet literals.
inline Json table_json(const Growth& g, const TransitionAmplitudeTable& table) {
  Json out = Json::array();
  for (int n = 2; n <= table.max_level; ++n) {
    const GrowthLevel& lvl = g.level(n);
    const GrowthLevel& prev = g.level(n - 1);
    for (std::size_t t = 0; t < lvl.transitions.size(); ++t) {
      const Transition& tr = lvl.transitions[t];
      Complex a = table.at(n, t);
      out.push_back(Json{{"parent", prev.causets[static_cast<std::size_t>(tr.parent)].literal()},
                         {"child", lvl.causets[static_cast<std::size_t>(tr.child)].literal()},
                         {"re", a.real()},
                         {"im", a.imag()}});
    }
  }
  return out;
}

/// Parses and validates the transition-table format: every record must name
/// an actual transition and every covered row must sum to 1.
inline TransitionAmplitudeTable table_from_json(const Growth& g, const Json& j,
                                                double tol = 1e-9) {
  if (!j.is_array()) throw std::invalid_argument("transition table: expected a JSON array");
  int max_parent_level = 1;
  struct Entry {
    int level;
    int parent, child;
    Complex a;
  };
  std::vector<Entry> entries;
  for (const auto& rec : j) {
    Causet parent = Causet::parse(rec.at("parent").get<std::string>());
    Causet child = Causet::parse(rec.at("child").get<std::string>());
    if (child.size() != parent.size() + 1)
      throw std::invalid_argument("transition table: sizes of " + parent.literal() + " -> " +
                                  child.literal() + " are not consecutive");
    int pi = g.find(parent), ci = g.find(child);
    if (pi < 0 || ci < 0)
      throw std::invalid_argument("transition table: causet outside built levels: " +
                                  parent.literal() + " -> " + child.literal());
    if (!g.has_transition(parent.size(), pi, ci))
      throw std::invalid_argument("transition table: unsupported transition " + parent.literal() +
                                  " -> " + child.literal());
    entries.push_back(Entry{parent.size(), pi, ci,
                            Complex(rec.at("re").get<double>(), rec.at("im").get<double>())});
    max_parent_level = std::max(max_parent_level, parent.size());
  }
  TransitionAmplitudeTable table;
  table.name = "file";
  table.max_level = max_parent_level + 1;
  if (table.max_level > g.max_level())
    throw std::invalid_argument("transition table: deeper than built levels");
  for (int n = 2; n <= table.max_level; ++n)
    table.amps.emplace_back(g.level(n).transitions.size(), Complex(0, 0));
  for (const auto& e : entries) {
    const GrowthLevel& lvl = g.level(e.level + 1);
    for (int t = lvl.parent_offset[static_cast<std::size_t>(e.parent)];
         t < lvl.parent_offset[static_cast<std::size_t>(e.parent) + 1]; ++t)
      if (lvl.transitions[static_cast<std::size_t>(t)].child == e.child)
        table.amps[static_cast<std::size_t>(e.level - 1)][static_cast<std::size_t>(t)] = e.a;
  }
  double resid = table.row_sum_residual(g);
  if (resid > tol)
    throw std::invalid_argument("transition table: row sums deviate from 1 by " +
                                std::to_string(resid));
  return table;
}

/// Operator dump: per nonempty source pair, the list of targets with
/// coefficients.
inline Json operator_json(const SiteIndex& sites, const SparsePairOperator& op) {
  Json out = Json::array();
  for (std::size_t s = 0; s < op.dim(); ++s) {
    const auto& list = op.apply(s);
    if (list.empty()) continue;
    auto [sx, sy] = op.pair_of(s);
    Json targets = Json::array();
    for (auto& [t, c] : list) {
      auto [tx, ty] = op.pair_of(t);
      targets.push_back(Json{{"pair", Json::array({sites.causet(tx).literal(), sites.causet(ty).literal()})},
                             {"re", c.real()},
                             {"im", c.imag()}});
    }
    out.push_back(Json{{"source", Json::array({sites.causet(sx).literal(), sites.causet(sy).literal()})},
                       {"targets", targets}});
  }
  return out;
}

}  // namespace causets
