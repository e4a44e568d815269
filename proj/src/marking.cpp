#include "lasat/marking.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

inline int need_of(double alpha, int width) {
  return static_cast<int>(std::ceil(alpha * width - 1e-9));
}

// "more than beta w" for an integer count
inline int dangerous_above(double beta, int width) {
  return static_cast<int>(std::floor(beta * width + 1e-9));
}

}  // namespace

struct marking_ctx::edge_sim {
  int cnt[2] = {0, 0};
  bool deleted = false;
  bool dangerous = false;
  int need = 0;
  int dang_above = 0;

  bool active() const { return !deleted && !dangerous; }

  void color(int b) {
    if (!active()) return;
    ++cnt[b];
    if (cnt[0] >= need && cnt[1] >= need)
      deleted = true;
    else if (cnt[b] > dang_above)
      dangerous = true;
  }
};

marking_ctx::marking_ctx(const formula& f, const seed& s, const marking_params& p)
    : f_(&f), par_(p) {
  const int n = f.var_count();
  a_.resize(static_cast<std::size_t>(n) + 1);
  bit1_.resize(static_cast<std::size_t>(n) + 1);
  for (var_id v = 1; v <= n; ++v) {
    a_[v] = u01(s, stream_key::mark_order(v));
    bit1_[v] = bit(s, stream_key::mark_phase1(v));
  }
  st1_.assign(static_cast<std::size_t>(n) + 1, -1);
  seed_ = s;
}

marking_ctx::marking_ctx(const formula& f, const marking_params& p, std::vector<double> order,
                         std::vector<int> phase1_bits)
    : f_(&f), par_(p), a_(std::move(order)), bit1_(std::move(phase1_bits)) {
  st1_.assign(static_cast<std::size_t>(f.var_count()) + 1, -1);
}

int marking_ctx::tree_cap() const {
  if (par_.tree_cap > 0) return par_.tree_cap;
  return std::max(1024, 4 * f_->var_count());
}

int marking_ctx::phase2_reps() const {
  if (par_.phase2_reps > 0) return par_.phase2_reps;
  double n = std::max(3, f_->var_count());
  double ll = std::max(1.0, std::log(std::log(n)));
  return std::max(8, static_cast<int>(std::ceil(std::log(n) / ll)));
}

int marking_ctx::phase1_component_cap() const {
  return std::max(8, static_cast<int>(std::ceil(
                         par_.component_cap_phase1 * std::log2(f_->var_count() + 1.0))));
}

int marking_ctx::phase3_component_cap() const {
  return std::max(6, static_cast<int>(std::ceil(
                         par_.component_cap_phase3 *
                         std::log2(std::log2(f_->var_count() + 4.0)))));
}

query_tree marking_ctx::build_query_tree(var_id v) const {
  query_tree t;
  t.root = v;
  t.nodes.push_back(v);
  std::set<var_id> seen{v};
  std::deque<var_id> queue{v};
  while (!queue.empty()) {
    var_id u = queue.front();
    queue.pop_front();
    std::set<var_id> nbrs;
    for (int cid : f_->clauses_of(u))
      for (const auto& l : f_->clauses()[static_cast<std::size_t>(cid)].lits)
        if (l.var != u && order_less(l.var, u)) nbrs.insert(l.var);
    for (var_id w : nbrs) {
      if (seen.count(w)) continue;
      seen.insert(w);
      t.nodes.push_back(w);
      t.edges.emplace_back(w, u);
      queue.push_back(w);
      if (static_cast<int>(t.nodes.size()) > tree_cap())
        fail(errc::tree_cap_exceeded, "query tree of variable " + std::to_string(v) +
                                          " exceeds cap " + std::to_string(tree_cap()));
    }
  }
  return t;
}

void marking_ctx::run_phase1_tree(var_id v) {
  // Phase 1 restricted to the query tree: every vertex of an incident clause
  // that is ordered before a tree vertex is itself in the tree, so the
  // induced run agrees with the global one on all tree vertices.
  query_tree t = build_query_tree(v);
  std::vector<var_id> order = t.nodes;
  std::sort(order.begin(), order.end(), [&](var_id x, var_id y) { return order_less(x, y); });

  std::map<int, edge_sim> sims;
  auto sim_of = [&](int cid) -> edge_sim& {
    auto it = sims.find(cid);
    if (it != sims.end()) return it->second;
    edge_sim e;
    int w = f_->clauses()[static_cast<std::size_t>(cid)].width();
    e.need = need_of(par_.alpha, w);
    e.dang_above = dangerous_above(par_.beta1, w);
    return sims.emplace(cid, e).first->second;
  };

  for (var_id u : order) {
    bool troubled = false;
    for (int cid : f_->clauses_of(u)) {
      if (sim_of(cid).dangerous) {
        troubled = true;
        break;
      }
    }
    std::int8_t st = troubled ? static_cast<std::int8_t>(p1s::troubled)
                              : static_cast<std::int8_t>(bit1_[u]);
    if (st1_[u] >= 0 && st1_[u] != st)
      fail(errc::sampler_failure, "phase-1 memo disagreement at variable " + std::to_string(u));
    st1_[u] = st;
    if (!troubled)
      for (int cid : f_->clauses_of(u)) sim_of(cid).color(bit1_[u]);
  }
}

p1s marking_ctx::phase1(var_id v) {
  if (v < 1 || v > f_->var_count())
    fail(errc::variable_out_of_range, "variable " + std::to_string(v) + " out of range");
  if (st1_[v] < 0) run_phase1_tree(v);
  return static_cast<p1s>(st1_[v]);
}

const marking_ctx::edge_final& marking_ctx::edge_after_phase1(int cid) {
  auto it = edge_final_.find(cid);
  if (it != edge_final_.end()) return it->second;

  const clause& c = f_->clauses()[static_cast<std::size_t>(cid)];
  std::vector<var_id> vars;
  for (const auto& l : c.lits) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end(), [&](var_id x, var_id y) { return order_less(x, y); });

  edge_final ef;
  edge_sim sim;
  sim.need = need_of(par_.alpha, c.width());
  sim.dang_above = dangerous_above(par_.beta1, c.width());
  for (var_id w : vars) {
    p1s st = phase1(w);
    if (st == p1s::troubled)
      ef.troubled.push_back(w);
    else
      sim.color(static_cast<int>(st));
  }
  ef.deleted = sim.deleted;
  ef.dangerous = sim.dangerous;
  ef.cnt[0] = sim.cnt[0];
  ef.cnt[1] = sim.cnt[1];
  std::sort(ef.troubled.begin(), ef.troubled.end());
  return edge_final_.emplace(cid, std::move(ef)).first->second;
}

std::vector<var_id> marking_ctx::phase1_component(var_id v) {
  if (phase1(v) != p1s::troubled)
    fail(errc::sampler_failure,
         "phase1_component called on a colored variable " + std::to_string(v));
  const int cap = phase1_component_cap();
  std::set<var_id> comp{v};
  std::deque<var_id> queue{v};
  while (!queue.empty()) {
    var_id u = queue.front();
    queue.pop_front();
    for (int cid : f_->clauses_of(u)) {
      const edge_final& ef = edge_after_phase1(cid);
      if (ef.deleted) continue;
      for (var_id w : ef.troubled) {
        if (comp.insert(w).second) {
          if (static_cast<int>(comp.size()) > cap)
            fail(errc::component_cap_exceeded,
                 "phase-1 component around " + std::to_string(v) + " exceeds cap " +
                     std::to_string(cap));
          queue.push_back(w);
        }
      }
    }
  }
  return {comp.begin(), comp.end()};
}

std::optional<marking_ctx::phase2_result> marking_ctx::try_phase2_rep(
    const std::vector<var_id>& comp, const std::vector<int>& edges, int rep) {
  struct e2 {
    int cnt[2];
    bool deleted2 = false;
    bool dangerous2 = false;
    int need, dang_above;
    bool active() const { return !deleted2 && !dangerous2; }
  };
  std::map<int, e2> st;
  for (int cid : edges) {
    const edge_final& ef = edge_after_phase1(cid);
    int w = f_->clauses()[static_cast<std::size_t>(cid)].width();
    e2 e{{ef.cnt[0], ef.cnt[1]}, false, false, need_of(par_.alpha, w),
         dangerous_above(par_.beta2, w)};
    st.emplace(cid, e);
  }
  std::set<var_id> in_comp(comp.begin(), comp.end());

  std::vector<var_id> order = comp;
  std::sort(order.begin(), order.end(), [&](var_id x, var_id y) { return order_less(x, y); });

  phase2_result res;
  res.rep = rep;
  res.comp = comp;
  std::set<var_id> troubled2;
  for (var_id u : order) {
    bool troubled = false;
    for (int cid : f_->clauses_of(u)) {
      auto it = st.find(cid);
      if (it != st.end() && it->second.dangerous2) {
        troubled = true;
        break;
      }
    }
    if (troubled) {
      troubled2.insert(u);
      continue;
    }
    int b = bit(seed_, stream_key::mark_phase2(u, rep));
    res.colors[u] = b;
    for (int cid : f_->clauses_of(u)) {
      auto it = st.find(cid);
      if (it == st.end() || !it->second.active()) continue;
      e2& e = it->second;
      ++e.cnt[b];
      if (e.cnt[0] >= e.need && e.cnt[1] >= e.need)
        e.deleted2 = true;
      else if (e.cnt[b] > e.dang_above)
        e.dangerous2 = true;
    }
  }

  // An undeleted clause with no free variable left cannot be repaired by
  // phase 3; such a repetition is rejected.
  for (int cid : edges) {
    const e2& e = st.at(cid);
    if (e.deleted2) continue;
    bool has_free = false;
    for (const auto& l : f_->clauses()[static_cast<std::size_t>(cid)].lits)
      if (troubled2.count(l.var)) has_free = true;
    if (!has_free && (e.cnt[0] < e.need || e.cnt[1] < e.need)) return std::nullopt;
    res.surviving_edges.push_back(cid);
  }

  // residual troubled-2 components must be small
  const int cap = phase3_component_cap();
  std::set<var_id> unvisited = troubled2;
  while (!unvisited.empty()) {
    var_id s0 = *unvisited.begin();
    std::set<var_id> cc{s0};
    std::deque<var_id> queue{s0};
    unvisited.erase(s0);
    while (!queue.empty()) {
      var_id u = queue.front();
      queue.pop_front();
      for (int cid : f_->clauses_of(u)) {
        auto it = st.find(cid);
        if (it == st.end() || it->second.deleted2) continue;
        for (const auto& l : f_->clauses()[static_cast<std::size_t>(cid)].lits) {
          if (troubled2.count(l.var) && cc.insert(l.var).second) {
            unvisited.erase(l.var);
            queue.push_back(l.var);
          }
        }
      }
    }
    if (static_cast<int>(cc.size()) > cap) return std::nullopt;
  }

  res.troubled2.assign(troubled2.begin(), troubled2.end());
  return res;
}

const marking_ctx::phase2_result& marking_ctx::phase2(var_id v) {
  std::vector<var_id> comp = phase1_component(v);
  var_id key = comp.front();
  auto it = phase2_.find(key);
  if (it != phase2_.end()) return it->second;

  std::set<int> edge_set;
  for (var_id u : comp)
    for (int cid : f_->clauses_of(u))
      if (!edge_after_phase1(cid).deleted) edge_set.insert(cid);
  std::vector<int> edges(edge_set.begin(), edge_set.end());

  const int reps = phase2_reps();
  for (int rep = 0; rep < reps; ++rep) {
    auto res = try_phase2_rep(comp, edges, rep);
    if (res) return phase2_.emplace(key, std::move(*res)).first->second;
  }
  fail(errc::all_repetitions_failed,
       "no phase-2 repetition of component around " + std::to_string(v) + " succeeded (" +
           std::to_string(reps) + " tried)");
}

std::map<var_id, int> marking_ctx::phase3(const phase2_result& ph2, var_id v) {
  std::set<var_id> troubled2(ph2.troubled2.begin(), ph2.troubled2.end());
  if (!troubled2.count(v))
    fail(errc::sampler_failure, "phase3 called on a colored variable " + std::to_string(v));

  // troubled-2 component of v via surviving edges
  std::set<var_id> comp{v};
  std::deque<var_id> queue{v};
  while (!queue.empty()) {
    var_id u = queue.front();
    queue.pop_front();
    for (int cid : ph2.surviving_edges) {
      const clause& c = f_->clauses()[static_cast<std::size_t>(cid)];
      bool touches = false;
      for (const auto& l : c.lits)
        if (l.var == u) touches = true;
      if (!touches) continue;
      for (const auto& l : c.lits)
        if (troubled2.count(l.var) && comp.insert(l.var).second) queue.push_back(l.var);
    }
  }

  var_id key = *comp.begin();
  auto it = phase3_.find(key);
  if (it != phase3_.end()) return it->second;

  auto search = [&](const std::set<var_id>& free) -> std::optional<std::map<var_id, int>> {
    std::vector<var_id> vars(free.begin(), free.end());
    const int f = static_cast<int>(vars.size());
    if (f > par_.phase3_search_cap)
      fail(errc::component_cap_exceeded,
           "phase-3 search over " + std::to_string(f) + " variables exceeds cap " +
               std::to_string(par_.phase3_search_cap));

    struct constraint {
      int need;
      int base[2];
      std::vector<int> free_idx;  // indices into vars
    };
    std::vector<constraint> cons;
    for (int cid : ph2.surviving_edges) {
      const clause& c = f_->clauses()[static_cast<std::size_t>(cid)];
      constraint con;
      con.need = need_of(par_.alpha, c.width());
      const edge_final& ef = edge_after_phase1(cid);
      con.base[0] = ef.cnt[0];
      con.base[1] = ef.cnt[1];
      bool relevant = false;
      for (const auto& l : c.lits) {
        auto cit = ph2.colors.find(l.var);
        if (cit != ph2.colors.end()) ++con.base[cit->second];
        auto pos = std::lower_bound(vars.begin(), vars.end(), l.var);
        if (pos != vars.end() && *pos == l.var) {
          con.free_idx.push_back(static_cast<int>(pos - vars.begin()));
          relevant = true;
        }
      }
      if (relevant) cons.push_back(std::move(con));
    }

    // lexicographic over sorted vars: first variable is the most significant bit
    const std::uint64_t end = std::uint64_t(1) << f;
    for (std::uint64_t mask = 0; mask < end; ++mask) {
      bool ok = true;
      for (const auto& con : cons) {
        int cnt[2] = {con.base[0], con.base[1]};
        for (int idx : con.free_idx) ++cnt[(mask >> (f - 1 - idx)) & 1];
        if (cnt[0] < con.need || cnt[1] < con.need) {
          ok = false;
          break;
        }
      }
      if (ok) {
        std::map<var_id, int> out;
        for (int i = 0; i < f; ++i)
          out[vars[static_cast<std::size_t>(i)]] = static_cast<int>((mask >> (f - 1 - i)) & 1);
        return out;
      }
    }
    return std::nullopt;
  };

  auto col = search(comp);
  if (!col) col = search(troubled2);  // whole residual union, desk-scale fallback
  if (!col)
    fail(errc::no_valid_coloring,
         "no valid phase-3 coloring around variable " + std::to_string(v));
  return phase3_.emplace(key, std::move(*col)).first->second;
}

bool marking_ctx::is_marked(var_id v) { return decide(v).marked; }

marking_decision marking_ctx::decide(var_id v) {
  marking_decision d;
  d.var = v;
  p1s st = phase1(v);
  for (int cid : f_->clauses_of(v)) {
    const edge_final& ef = edge_after_phase1(cid);
    int need = need_of(par_.alpha, f_->clauses()[static_cast<std::size_t>(cid)].width());
    if (!ef.deleted && ef.troubled.empty() && (ef.cnt[0] < need || ef.cnt[1] < need))
      fail(errc::marking_broken, "clause " + std::to_string(cid) +
                                     " was fully colored in phase 1 below the alpha threshold");
  }
  if (st != p1s::troubled) {
    d.marked = st == p1s::colored1;
    d.phase = 1;
    return d;
  }
  d.troubled1 = true;
  const phase2_result& ph2 = phase2(v);
  d.phase2_rep = ph2.rep;
  auto cit = ph2.colors.find(v);
  if (cit != ph2.colors.end()) {
    d.marked = cit->second == 1;
    d.phase = 2;
    return d;
  }
  d.troubled2 = true;
  auto col3 = phase3(ph2, v);
  d.marked = col3.at(v) == 1;
  d.phase = 3;
  return d;
}

bool is_marked(const formula& f, const seed& s, const marking_params& p, var_id v) {
  marking_ctx ctx(f, s, p);
  return ctx.is_marked(v);
}

std::vector<var_id> marking_result::marked_vars() const {
  std::vector<var_id> out;
  for (var_id v = 1; v < static_cast<var_id>(marked.size()); ++v)
    if (marked[static_cast<std::size_t>(v)] == 1) out.push_back(v);
  return out;
}

marking_result compute_marking(const formula& f, const seed& s, const marking_params& p) {
  marking_ctx ctx(f, s, p);
  marking_result res;
  res.marked.assign(static_cast<std::size_t>(f.var_count()) + 1, -1);
  for (var_id v = 1; v <= f.var_count(); ++v) {
    try {
      marking_decision d = ctx.decide(v);
      res.marked[static_cast<std::size_t>(v)] = d.marked ? 1 : 0;
      res.decisions.push_back(d);
    } catch (const error& e) {
      res.failed = true;
      if (res.failure.empty()) res.failure = e.what();
    }
  }
  return res;
}

marking_validation validate_marking(const formula& f, const std::vector<var_id>& marking,
                                    double alpha) {
  std::set<var_id> in(marking.begin(), marking.end());
  marking_validation val;
  for (const auto& c : f.clauses()) {
    marking_validation::clause_counts cc;
    cc.id = c.id;
    cc.width = c.width();
    cc.need = need_of(alpha, c.width());
    cc.marked = 0;
    for (const auto& l : c.lits)
      if (in.count(l.var)) ++cc.marked;
    cc.unmarked = cc.width - cc.marked;
    if (cc.marked < cc.need || cc.unmarked < cc.need) val.valid = false;
    val.per_clause.push_back(cc);
  }
  return val;
}

}  // namespace lasat
