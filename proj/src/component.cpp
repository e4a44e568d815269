#include "lasat/component.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lasat/errors.hpp"

namespace lasat {

long long default_conn_cap(int k, int d, int n) {
  double lg = std::log2(std::max(2, n) + 1.0);
  return std::max(256LL, static_cast<long long>(std::ceil(8.0 * k * d * lg * lg)));
}

conn_result conn(const formula& f, const seed& s, const scan_schedule& sched,
                 const margin_params& par, var_id v, const conn_params& cp) {
  if (v < 1 || v > f.var_count())
    fail(errc::variable_out_of_range, "variable " + std::to_string(v) + " out of range");
  if (sched.contains(v)) fail(errc::sampler_failure, "conn called on a marked variable");

  const long long cap =
      cp.clause_cap != 0 ? cp.clause_cap
                         : default_conn_cap(f.k_max(), f.max_degree(), f.var_count());

  conn_result res;
  res.sigma = partial_assignment(f.var_count());

  auto sample_marked = [&](var_id w) {
    cttp_stats st;
    int val = margin_sample(f, s, sched, par, w, &st);
    res.sigma.set_bit(w, val);
    res.margin_stats.lb_draws += st.lb_draws;
    res.margin_stats.glauber_calls += st.glauber_calls;
    res.margin_stats.cap_hits += st.cap_hits;
    res.margin_stats.final_r += st.final_r;
    res.margin_stats.max_depth = std::max(res.margin_stats.max_depth, st.max_depth);
  };

  std::vector<int> stack;
  std::set<int> seen;
  {
    std::vector<int> init = f.clauses_of(v);
    std::sort(init.begin(), init.end());
    for (int cid : init) {
      stack.push_back(cid);
      seen.insert(cid);
    }
  }
  std::set<int> explored;

  while (!stack.empty()) {
    int cid = stack.back();
    stack.pop_back();
    const clause& c = f.clauses()[static_cast<std::size_t>(cid)];

    auto sat_now = [&] {
      return clause_state(c, res.sigma).status == clause_status::satisfied;
    };
    if (sat_now()) continue;  // satisfied clauses drop out of the stack

    // walk the reduced clause, drawing marked variables as they are met
    std::vector<var_id> free_vars;
    for (const auto& l : c.lits)
      if (!res.sigma.assigned(l.var)) free_vars.push_back(l.var);
    std::sort(free_vars.begin(), free_vars.end());
    bool satisfied = false;
    for (var_id w : free_vars) {
      if (res.sigma.assigned(w)) continue;
      if (sched.contains(w)) {
        sample_marked(w);
        if (sat_now()) {
          satisfied = true;
          break;
        }
      }
    }
    if (satisfied) continue;

    explored.insert(cid);
    if (static_cast<long long>(explored.size()) > cap)
      fail(errc::component_too_large,
           "conn explored more than " + std::to_string(cap) + " clauses");

    auto st = clause_state(c, res.sigma);
    std::vector<int> pushes;
    for (const auto& l : st.open_lits) {
      for (int nid : f.clauses_of(l.var)) {
        if (seen.count(nid)) continue;
        const clause& nc = f.clauses()[static_cast<std::size_t>(nid)];
        if (clause_state(nc, res.sigma).status == clause_status::satisfied) continue;
        pushes.push_back(nid);
        seen.insert(nid);
      }
    }
    std::sort(pushes.begin(), pushes.end());
    for (int nid : pushes) stack.push_back(nid);
  }

  // assemble the component of v from the explored clauses
  std::set<var_id> vars{v};
  std::vector<reduced_clause> comp_clauses;
  {
    // explored clauses may belong to several components once sigma settles;
    // keep the piece connected to v
    std::map<int, reduced_clause> open;
    for (int cid : explored) {
      auto st = clause_state(f.clauses()[static_cast<std::size_t>(cid)], res.sigma);
      if (st.status == clause_status::open) open.emplace(cid, reduced_clause{cid, st.open_lits});
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto it = open.begin(); it != open.end();) {
        bool touches = false;
        for (const auto& l : it->second.lits)
          if (vars.count(l.var)) touches = true;
        if (touches) {
          for (const auto& l : it->second.lits) vars.insert(l.var);
          comp_clauses.push_back(it->second);
          it = open.erase(it);
          grew = true;
        } else {
          ++it;
        }
      }
    }
  }
  std::sort(comp_clauses.begin(), comp_clauses.end(),
            [](const reduced_clause& a, const reduced_clause& b) { return a.orig_id < b.orig_id; });
  res.comp.vars.assign(vars.begin(), vars.end());
  res.comp.clauses = std::move(comp_clauses);
  res.visited.assign(seen.begin(), seen.end());
  return res;
}

std::vector<std::pair<var_id, int>> uniform_sample_component(const seed& s, const component& comp,
                                                             int enum_cap) {
  std::vector<std::pair<var_id, int>> out;
  const var_id rep = comp.canonical_rep();

  std::set<var_id> in_clause;
  for (const auto& rc : comp.clauses)
    for (const auto& l : rc.lits) in_clause.insert(l.var);

  if (!comp.clauses.empty()) {
    std::vector<var_id> vars(in_clause.begin(), in_clause.end());
    const int nv = static_cast<int>(vars.size());
    if (nv > enum_cap)
      fail(errc::component_too_large, "component with " + std::to_string(nv) +
                                          " variables exceeds enumeration cap " +
                                          std::to_string(enum_cap));
    auto pos_of = [&](var_id v) {
      return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };
    struct masks {
      std::uint64_t pos = 0, neg = 0;
    };
    std::vector<masks> cms;
    for (const auto& rc : comp.clauses) {
      masks m;
      for (const auto& l : rc.lits)
        (l.positive ? m.pos : m.neg) |= std::uint64_t(1) << pos_of(l.var);
      cms.push_back(m);
    }
    // lexicographic enumeration: first variable at the most significant bit
    std::vector<std::uint64_t> sats;
    const std::uint64_t end = std::uint64_t(1) << nv;
    for (std::uint64_t lex = 0; lex < end; ++lex) {
      std::uint64_t x = 0;
      for (int i = 0; i < nv; ++i)
        if ((lex >> (nv - 1 - i)) & 1) x |= std::uint64_t(1) << i;
      bool sat = true;
      for (const auto& m : cms) {
        if ((x & m.pos) == 0 && (~x & m.neg) == 0) {
          sat = false;
          break;
        }
      }
      if (sat) sats.push_back(x);
    }
    if (sats.empty()) fail(errc::unsatisfiable, "component has no satisfying assignment");
    auto idx = static_cast<std::size_t>(u01(s, stream_key::component_draw(rep, 0)) *
                                        static_cast<double>(sats.size()));
    if (idx >= sats.size()) idx = sats.size() - 1;
    std::uint64_t chosen = sats[idx];
    for (int i = 0; i < nv; ++i)
      out.emplace_back(vars[static_cast<std::size_t>(i)],
                       static_cast<int>((chosen >> i) & 1));
  }

  // variables of the component outside every clause are uniform bits
  std::int64_t counter = 1;
  for (var_id v : comp.vars) {
    if (!in_clause.count(v)) out.emplace_back(v, bit(s, stream_key::component_draw(rep, counter)));
    ++counter;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lasat
