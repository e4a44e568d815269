#include "lasat/formula.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

const std::vector<int> kNoClauses{};

}  // namespace

formula formula::parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  long long m = -1;
  std::vector<std::vector<int>> encoded;
  std::vector<int> current;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c' || line[0] == '%') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, fmt;
      if (!(hs >> p >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
        fail(errc::malformed_dimacs, "bad header line: " + line);
      continue;
    }
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        encoded.push_back(current);
        current.clear();
      } else {
        current.push_back(lit);
      }
    }
    if (!ls.eof()) fail(errc::malformed_dimacs, "non-integer token in clause line: " + line);
  }
  if (n < 0) fail(errc::malformed_dimacs, "missing 'p cnf' header");
  if (!current.empty()) fail(errc::malformed_dimacs, "last clause is not 0-terminated");
  if (m >= 0 && static_cast<long long>(encoded.size()) != m)
    fail(errc::malformed_dimacs, "header announces " + std::to_string(m) + " clauses, found " +
                                     std::to_string(encoded.size()));
  return from_clauses(n, std::move(encoded));
}

formula formula::from_clauses(int n, std::vector<std::vector<int>> encoded) {
  formula f;
  f.n_ = n;
  int id = 0;
  for (const auto& enc : encoded) {
    if (enc.empty()) fail(errc::empty_clause, "clause " + std::to_string(id) + " is empty");
    clause c;
    c.id = id++;
    std::set<var_id> seen;
    for (int lit : enc) {
      var_id v = lit > 0 ? lit : -lit;
      if (v < 1 || v > n)
        fail(errc::variable_out_of_range,
             "variable " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
      if (!seen.insert(v).second)
        fail(errc::repeated_variable,
             "variable " + std::to_string(v) + " appears twice in clause " + std::to_string(c.id));
      c.lits.push_back({v, lit > 0});
    }
    f.clauses_.push_back(std::move(c));
  }
  f.build_index();
  return f;
}

void formula::build_index() {
  occ_.assign(static_cast<std::size_t>(n_) + 1, {});
  k_max_ = 0;
  for (const auto& c : clauses_) {
    k_max_ = std::max(k_max_, c.width());
    for (const auto& l : c.lits) occ_[static_cast<std::size_t>(l.var)].push_back(c.id);
  }
  d_ = 0;
  for (var_id v = 1; v <= n_; ++v) d_ = std::max(d_, static_cast<int>(occ_[v].size()));
  delta_ = 0;
  for (const auto& c : clauses_) {
    std::set<int> touching;
    for (const auto& l : c.lits)
      for (int cid : occ_[static_cast<std::size_t>(l.var)]) touching.insert(cid);
    delta_ = std::max(delta_, static_cast<int>(touching.size()));
  }
}

std::string formula::to_dimacs() const {
  std::ostringstream out;
  out << "p cnf " << n_ << ' ' << clauses_.size() << '\n';
  for (const auto& c : clauses_) {
    for (const auto& l : c.lits) out << l.encode() << ' ';
    out << "0\n";
  }
  return out.str();
}

const std::vector<int>& formula::clauses_of(var_id v) const {
  if (v < 1 || v > n_)
    fail(errc::variable_out_of_range, "variable " + std::to_string(v) + " out of range");
  return occ_[static_cast<std::size_t>(v)];
}

degree_profile_t degree_profile(const formula& f) {
  return {f.k_max(), f.max_degree(), f.max_overlap()};
}

std::vector<var_id> partial_assignment::assigned_vars() const {
  std::vector<var_id> out;
  for (var_id v = 1; v <= var_count(); ++v)
    if (assigned(v)) out.push_back(v);
  return out;
}

std::vector<var_id> partial_assignment::accessed_vars() const {
  std::vector<var_id> out;
  for (var_id v = 1; v <= var_count(); ++v)
    if (accessed(v)) out.push_back(v);
  return out;
}

clause_state_t clause_state(const clause& c, const partial_assignment& sigma) {
  clause_state_t st;
  bool all_false = true;
  for (const auto& l : c.lits) {
    if (sigma.assigned(l.var)) {
      if (l.satisfied_by(sigma.value(l.var))) return {clause_status::satisfied, {}};
    } else {
      st.open_lits.push_back(l);
      all_false = false;
    }
  }
  st.status = all_false ? clause_status::falsified : clause_status::open;
  if (st.status == clause_status::falsified) st.open_lits.clear();
  return st;
}

reduced_formula reduce(const formula& f, const partial_assignment& sigma, bool strict) {
  reduced_formula rf;
  for (var_id v = 1; v <= f.var_count(); ++v)
    if (!sigma.assigned(v)) rf.free_vars.push_back(v);
  for (const auto& c : f.clauses()) {
    auto st = clause_state(c, sigma);
    if (st.status == clause_status::satisfied) continue;
    if (st.status == clause_status::falsified) {
      if (strict)
        fail(errc::infeasible_partial_assignment,
             "clause " + std::to_string(c.id) + " falsified by the partial assignment");
      continue;
    }
    rf.clauses.push_back({c.id, std::move(st.open_lits)});
  }
  return rf;
}

component component_of(const formula& f, const partial_assignment& sigma, var_id v) {
  if (v < 1 || v > f.var_count())
    fail(errc::variable_out_of_range, "variable " + std::to_string(v) + " out of range");
  if (sigma.assigned(v))
    fail(errc::variable_assigned, "variable " + std::to_string(v) + " is already 0/1-assigned");

  // BFS over open clauses of H_Phi^sigma starting from v.
  std::set<var_id> vars{v};
  std::set<int> visited;
  std::vector<reduced_clause> comp_clauses;
  std::deque<var_id> queue{v};
  while (!queue.empty()) {
    var_id w = queue.front();
    queue.pop_front();
    for (int cid : f.clauses_of(w)) {
      if (visited.count(cid)) continue;
      visited.insert(cid);
      auto st = clause_state(f.clauses()[static_cast<std::size_t>(cid)], sigma);
      if (st.status != clause_status::open) continue;
      for (const auto& l : st.open_lits)
        if (vars.insert(l.var).second) queue.push_back(l.var);
      comp_clauses.push_back({cid, std::move(st.open_lits)});
    }
  }
  std::sort(comp_clauses.begin(), comp_clauses.end(),
            [](const reduced_clause& a, const reduced_clause& b) { return a.orig_id < b.orig_id; });
  component comp;
  comp.vars.assign(vars.begin(), vars.end());
  comp.clauses = std::move(comp_clauses);
  return comp;
}

}  // namespace lasat
