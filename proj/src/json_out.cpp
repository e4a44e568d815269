#include "lasat/json_out.hpp"

namespace lasat {

json to_json(const formula& f) {
  json j;
  j["n"] = f.var_count();
  j["k"] = f.k_max();
  j["d"] = f.max_degree();
  j["delta"] = f.max_overlap();
  json cls = json::array();
  for (const auto& c : f.clauses()) {
    json lits = json::array();
    for (const auto& l : c.lits) lits.push_back(l.encode());
    cls.push_back({{"id", c.id}, {"literals", lits}});
  }
  j["clauses"] = cls;
  return j;
}

json to_json(const component& c) {
  json j;
  j["vars"] = c.vars;
  j["canonical_rep"] = c.vars.empty() ? 0 : c.canonical_rep();
  json cls = json::array();
  for (const auto& rc : c.clauses) {
    json lits = json::array();
    for (const auto& l : rc.lits) lits.push_back(l.encode());
    cls.push_back({{"id", rc.orig_id}, {"literals", lits}});
  }
  j["clauses"] = cls;
  return j;
}

json to_json(const conn_result& r) {
  json j;
  j["component"] = to_json(r.comp);
  json sigma = json::object();
  for (var_id v = 1; v <= r.sigma.var_count(); ++v)
    if (r.sigma.assigned(v)) sigma[std::to_string(v)] = r.sigma.value(v);
  j["sigma"] = sigma;
  j["visited_clauses"] = r.visited;
  return j;
}

json to_json(const marking_validation& v) {
  json j;
  j["valid"] = v.valid;
  json per = json::array();
  for (const auto& cc : v.per_clause)
    per.push_back({{"clause", cc.id},
                   {"width", cc.width},
                   {"marked", cc.marked},
                   {"unmarked", cc.unmarked},
                   {"need", cc.need}});
  j["per_clause"] = per;
  return j;
}

json to_json(const marking_result& m, const marking_validation& v) {
  json j;
  j["failed"] = m.failed;
  if (m.failed) j["failure"] = m.failure;
  j["marked"] = m.marked_vars();
  json phases = json::object();
  for (const auto& d : m.decisions) phases[std::to_string(d.var)] = d.phase;
  j["decided_in_phase"] = phases;
  j["validation"] = to_json(v);
  return j;
}

json to_json(const sample_result& r, bool with_trace) {
  json j;
  j["var"] = r.var;
  j["value"] = r.value;
  j["branch"] = r.marked ? "marked" : "unmarked";
  if (with_trace) {
    j["stats"] = {{"final_r", r.final_r},
                  {"cap_hits", r.cap_hits},
                  {"max_depth", r.max_depth},
                  {"component_clauses", r.component_clauses},
                  {"component_vars", r.component_vars}};
  }
  return j;
}

json to_json(const condition_check& c) {
  return {{"name", c.name}, {"pass", c.pass},   {"lhs", c.lhs},
          {"rhs", c.rhs},   {"slack", c.slack}, {"note", c.note}};
}

json to_json(const conditions_report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"all_pass", r.all_pass}, {"checks", checks}};
}

}  // namespace lasat
