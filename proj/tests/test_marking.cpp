#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lasat/errors.hpp"
#include "lasat/marking.hpp"
#include "lasat/verify.hpp"

using namespace lasat;

namespace {

// order[v] = v, phase-1 color bits injected per variable
marking_ctx injected(const formula& f, const marking_params& p, std::vector<int> bits1) {
  std::vector<double> order(static_cast<std::size_t>(f.var_count()) + 1, 0.0);
  for (var_id v = 1; v <= f.var_count(); ++v) order[static_cast<std::size_t>(v)] = v;
  bits1.insert(bits1.begin(), 0);  // 1-based
  return marking_ctx(f, p, std::move(order), std::move(bits1));
}

}  // namespace

TEST_CASE("query tree") {
  formula f = example_formula();
  seed s = seed::from_u64(501);
  marking_params p;
  marking_ctx ctx(f, s, p);

  for (var_id v = 1; v <= 5; ++v) {
    query_tree t = ctx.build_query_tree(v);
    CHECK(t.root == v);
    CHECK(t.nodes.front() == v);
    // each child shares a clause with its parent
    for (auto [child, parent] : t.edges) {
      bool share = false;
      for (const auto& c : f.clauses()) {
        bool has_c = false, has_p = false;
        for (const auto& l : c.lits) {
          has_c |= l.var == child;
          has_p |= l.var == parent;
        }
        share |= has_c && has_p;
      }
      CHECK(share);
    }
    // determinism
    query_tree t2 = ctx.build_query_tree(v);
    CHECK(t.nodes == t2.nodes);
    CHECK(t.edges == t2.edges);
  }

  marking_params capped;
  capped.tree_cap = 1;
  marking_ctx small(f, s, capped);
  bool tripped = false;
  for (var_id v = 1; v <= 5 && !tripped; ++v) {
    try {
      small.build_query_tree(v);
    } catch (const error& e) {
      tripped = e.code() == errc::tree_cap_exceeded;
    }
  }
  CHECK(tripped);
}

TEST_CASE("a vertex ordered before all clause-sharing neighbours has a singleton tree") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 64; ++si) {
    seed s = seed::from_u64(1000 + si);
    marking_ctx ctx(f, s, {});
    for (var_id v = 1; v <= 5; ++v) {
      query_tree t = ctx.build_query_tree(v);
      if (t.nodes.size() == 1) return;  // found the local-minimum case
    }
  }
  FAIL("no local minimum found over 64 seeds");
}

TEST_CASE("phase 1: two-sided alpha count deletes the edge, later vertices stay colored") {
  // single width-5 clause, alpha = 1/3 (need 2): colors 0,0,1,1,then anything
  formula f = formula::parse_dimacs("p cnf 5 1\n1 2 3 4 5 0\n");
  marking_params p;
  p.alpha = 1.0 / 3;
  marking_ctx ctx = injected(f, p, {0, 0, 1, 1, 0});
  for (var_id v = 1; v <= 5; ++v) CHECK(ctx.phase1(v) != p1s::troubled);
  CHECK(ctx.phase1(5) == p1s::colored0);
  const auto& ef = ctx.edge_after_phase1(0);
  CHECK(ef.deleted);
  CHECK_FALSE(ef.dangerous);
}

TEST_CASE("phase 1: a monochromatic prefix beyond beta1 k marks the rest troubled") {
  // width 5, beta1 = 0.778: dangerous once one color exceeds 3.89
  formula f = formula::parse_dimacs("p cnf 5 1\n1 2 3 4 5 0\n");
  marking_params p;
  p.alpha = 1.0 / 3;
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 1});
  CHECK(ctx.phase1(1) == p1s::colored0);
  CHECK(ctx.phase1(4) == p1s::colored0);
  CHECK(ctx.phase1(5) == p1s::troubled);
  const auto& ef = ctx.edge_after_phase1(0);
  CHECK(ef.dangerous);
  CHECK_FALSE(ef.deleted);
  CHECK(ef.troubled == std::vector<var_id>{5});
}

TEST_CASE("a variable in no clause is colored unconstrained") {
  formula f = formula::parse_dimacs("p cnf 2 1\n1 2 0\n");
  marking_params p;
  marking_ctx ctx(f, seed::from_u64(77), p);
  formula g = formula::parse_dimacs("p cnf 3 1\n1 2 0\n");  // variable 3 isolated
  marking_ctx ctx3(g, seed::from_u64(77), p);
  CHECK(ctx3.phase1(3) != p1s::troubled);
}

TEST_CASE("fully colored clause below the alpha threshold surfaces MarkingBroken") {
  formula f = formula::parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  marking_params p;
  p.alpha = 1.0 / 3;
  marking_ctx ctx = injected(f, p, {0, 0, 0});  // monochromatic
  CHECK_THROWS_AS(ctx.decide(1), error);
  try {
    injected(f, p, {0, 0, 0}).decide(2);
  } catch (const error& e) {
    CHECK(e.code() == errc::marking_broken);
  }
}

TEST_CASE("phase 1 component") {
  // width 6, beta1 = 0.7: dangerous when a color count exceeds 4.2
  formula f = formula::parse_dimacs("p cnf 7 2\n1 2 3 4 5 6 0\n6 7 1 0\n");
  marking_params p;
  p.alpha = 0.25;
  p.beta1 = 0.7;
  p.beta2 = 0.9;
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 0, 1, 1});
  // clause 0 turns dangerous at vertex 5; vertex 6 becomes troubled
  CHECK(ctx.phase1(6) == p1s::troubled);
  CHECK(ctx.phase1(7) != p1s::troubled);
  auto comp = ctx.phase1_component(6);
  CHECK(comp == std::vector<var_id>{6});
  CHECK_THROWS_AS(ctx.phase1_component(1), error);  // colored variable

  // component membership statuses agree with fresh per-vertex recomputation
  for (var_id v : comp) {
    marking_ctx fresh = injected(f, p, {0, 0, 0, 0, 0, 1, 1});
    CHECK(fresh.phase1(v) == p1s::troubled);
  }
}

TEST_CASE("phase 3 on hand-built residuals") {
  formula f = formula::parse_dimacs("p cnf 8 1\n1 2 3 4 5 6 7 8 0\n");
  marking_params p;
  p.alpha = 0.25;  // need 2 per color
  p.beta1 = 0.6;   // dangerous beyond 4.8 -> at the fifth zero
  p.beta2 = 0.7;
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 0, 1, 1, 1});
  // clause dangerous at vertex 5; vertices 6..8 troubled-1
  CHECK(ctx.phase1(6) == p1s::troubled);
  CHECK(ctx.phase1(8) == p1s::troubled);
  CHECK(ctx.edge_after_phase1(0).cnt[0] == 5);
  CHECK(ctx.edge_after_phase1(0).cnt[1] == 0);

  marking_ctx::phase2_result ph2;
  ph2.rep = 0;
  ph2.comp = {6, 7, 8};
  ph2.colors = {{6, 0}};  // pretend phase 2 colored vertex 6 zero
  ph2.troubled2 = {7, 8};
  ph2.surviving_edges = {0};

  // base (6,0); the first lexicographic valid completion is (7,8) = (1,1)
  auto col = ctx.phase3(ph2, 7);
  CHECK(col.at(7) == 1);
  CHECK(col.at(8) == 1);

  // zero surviving edges: everything takes the first lexicographic color 0
  // (fresh context: phase-3 results are memoized per residual component)
  marking_ctx::phase2_result lone;
  lone.comp = {6, 7, 8};
  lone.troubled2 = {7};
  marking_ctx ctx2 = injected(f, p, {0, 0, 0, 0, 0, 1, 1, 1});
  auto zero = ctx2.phase3(lone, 7);
  CHECK(zero.at(7) == 0);

  // no valid completion surfaces NoValidColoring
  marking_ctx::phase2_result stuck;
  stuck.comp = {6, 7, 8};
  stuck.colors = {{6, 0}, {7, 0}};
  stuck.troubled2 = {8};
  stuck.surviving_edges = {0};
  marking_ctx fresh = injected(f, p, {0, 0, 0, 0, 0, 1, 1, 1});
  CHECK_THROWS_AS(fresh.phase3(stuck, 8), error);
}

TEST_CASE("phase 3 output meets the two-sided threshold by direct recount") {
  formula f = formula::parse_dimacs("p cnf 8 1\n1 2 3 4 5 6 7 8 0\n");
  marking_params p;
  p.alpha = 0.25;
  p.beta1 = 0.6;
  p.beta2 = 0.7;
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 0, 1, 1, 1});
  marking_ctx::phase2_result ph2;
  ph2.comp = {6, 7, 8};
  ph2.colors = {{6, 0}};
  ph2.troubled2 = {7, 8};
  ph2.surviving_edges = {0};
  auto col = ctx.phase3(ph2, 7);
  int cnt[2] = {ctx.edge_after_phase1(0).cnt[0], ctx.edge_after_phase1(0).cnt[1]};
  ++cnt[ph2.colors.at(6)];
  for (auto [v, b] : col) ++cnt[b];
  CHECK(cnt[0] >= 2);
  CHECK(cnt[1] >= 2);
}

TEST_CASE("is_marked is query-oblivious and matches compute_marking") {
  std::mt19937_64 rng(31);
  int succeeded = 0;
  for (int inst = 0; inst < 12; ++inst) {
    formula f = gen_formula(10, 6, 5, 3, rng());
    seed s = seed::from_u64(rng());
    marking_result mr = compute_marking(f, s, {});
    if (mr.failed) continue;
    ++succeeded;
    std::vector<var_id> perm;
    for (var_id v = 1; v <= 10; ++v) perm.push_back(v);
    std::shuffle(perm.begin(), perm.end(), rng);
    marking_ctx ctx(f, s, {});
    for (var_id v : perm)
      CHECK(ctx.is_marked(v) == (mr.marked[static_cast<std::size_t>(v)] == 1));
    // single-query contexts agree too
    CHECK(is_marked(f, s, {}, perm[0]) == (mr.marked[static_cast<std::size_t>(perm[0])] == 1));
  }
  CHECK(succeeded > 0);
}

TEST_CASE("successful markings validate") {
  formula f = example_formula();
  int succeeded = 0;
  for (std::uint64_t si = 0; si < 200; ++si) {
    marking_result mr = compute_marking(f, seed::from_u64(si * 31 + 7), {});
    if (mr.failed) continue;
    ++succeeded;
    CHECK(validate_marking(f, mr.marked_vars(), marking_params{}.alpha).valid);
  }
  CHECK(succeeded > 20);
}

TEST_CASE("validate_marking on the worked example") {
  formula f = example_formula();
  auto ok = validate_marking(f, {2, 5}, 1.0 / 3);
  CHECK(ok.valid);
  for (const auto& cc : ok.per_clause) {
    CHECK(cc.marked == 1);
    CHECK(cc.unmarked == 2);
    CHECK(cc.need == 1);
  }
  CHECK_FALSE(validate_marking(f, {}, 1.0 / 3).valid);
  CHECK_FALSE(validate_marking(f, {1, 2, 3, 4, 5}, 1.0 / 3).valid);
}

TEST_CASE("phase decisions report the deciding phase") {
  formula f = formula::parse_dimacs("p cnf 5 1\n1 2 3 4 5 0\n");
  marking_params p;
  p.alpha = 1.0 / 3;
  marking_ctx ctx = injected(f, p, {0, 0, 1, 1, 0});
  marking_decision d = ctx.decide(3);
  CHECK(d.phase == 1);
  CHECK(d.marked);
  CHECK_FALSE(d.troubled1);
}

TEST_CASE("query tree children are strictly decreasing in the order key") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 20; ++si) {
    marking_ctx ctx(f, seed::from_u64(600 + si), {});
    for (var_id v = 1; v <= 5; ++v) {
      query_tree t = ctx.build_query_tree(v);
      for (auto [child, parent] : t.edges) CHECK(ctx.order_key(child) < ctx.order_key(parent));

      // the node set is exactly the closure under decreasing clause-sharing steps
      std::set<var_id> closure{v};
      bool grew = true;
      while (grew) {
        grew = false;
        for (var_id u : std::set<var_id>(closure)) {
          for (int cid : f.clauses_of(u)) {
            for (const auto& l : f.clauses()[static_cast<std::size_t>(cid)].lits) {
              if (l.var != u && ctx.order_key(l.var) < ctx.order_key(u) &&
                  closure.insert(l.var).second)
                grew = true;
            }
          }
        }
      }
      CHECK(std::set<var_id>(t.nodes.begin(), t.nodes.end()) == closure);
    }
  }
}

TEST_CASE("phase-1 component cap surfaces ComponentCapExceeded") {
  // width 8, beta1 = 0.55: seven zeros in a row trouble the tail vertices
  formula f = formula::parse_dimacs("p cnf 8 1\n1 2 3 4 5 6 7 8 0\n");
  marking_params p;
  p.alpha = 0.25;
  p.beta1 = 0.55;  // dangerous beyond 4.4
  p.component_cap_phase1 = 0;  // cap floor of 8 still applies
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(ctx.phase1(6) == p1s::troubled);
  CHECK_NOTHROW(ctx.phase1_component(6));  // 3 troubled vertices, under the floor

  // a fabricated tighter context cannot shrink below the floor of 8, so grow
  // the troubled set instead: width 14 with thirteen zeros troubles 9 vertices
  std::string dimacs = "p cnf 14 1\n";
  for (int v = 1; v <= 14; ++v) dimacs += std::to_string(v) + " ";
  dimacs += "0\n";
  formula wide = formula::parse_dimacs(dimacs);
  marking_params wp;
  wp.alpha = 0.2;
  wp.beta1 = 0.3;  // dangerous beyond 4.2 -> at the fifth zero
  wp.component_cap_phase1 = 0;
  std::vector<int> bits(14, 0);
  marking_ctx wctx = injected(wide, wp, bits);
  CHECK(wctx.phase1(14) == p1s::troubled);
  CHECK_THROWS_AS(wctx.phase1_component(14), error);  // 9 troubled > floor 8
}

TEST_CASE("phase 2 statuses match a hand simulation of the scan") {
  // two width-6 clauses sharing variables 5 and 6; the first turns dangerous
  // in phase 1 after four zeros, the second gets deleted by its own colors
  formula f = formula::parse_dimacs("p cnf 10 2\n1 2 3 4 5 6 0\n5 6 7 8 9 10 0\n");
  marking_params p;
  p.alpha = 0.25;  // need 2
  p.beta1 = 0.55;  // dangerous beyond 3.3
  p.beta2 = 0.7;   // dangerous beyond 4.2
  marking_ctx ctx = injected(f, p, {0, 0, 0, 0, 1, 1, 0, 0, 1, 1});

  CHECK(ctx.phase1(5) == p1s::troubled);
  CHECK(ctx.phase1(6) == p1s::troubled);
  CHECK(ctx.edge_after_phase1(0).dangerous);
  CHECK(ctx.edge_after_phase1(1).deleted);  // colors 0,0,1,1 among vars 7..10
  CHECK(ctx.phase1_component(5) == std::vector<var_id>{5, 6});

  // hand-simulate repetitions of the phase-2 scan over {5, 6} against the
  // same tape until one is acceptable, then compare with the context
  seed s0{};  // injected contexts draw phase-2 colors from the default seed
  int expect_rep = -1;
  std::map<var_id, int> expect_colors;
  std::set<var_id> expect_troubled;
  for (int rep = 0; rep < 64 && expect_rep < 0; ++rep) {
    int cnt[2] = {4, 0};  // clause 0 after phase 1
    bool dangerous2 = false, deleted2 = false;
    std::map<var_id, int> colors;
    std::set<var_id> troubled;
    for (var_id w : {5, 6}) {
      if (dangerous2) {
        troubled.insert(w);
        continue;
      }
      int b = bit(s0, stream_key::mark_phase2(w, rep));
      colors[w] = b;
      if (deleted2) continue;
      ++cnt[b];
      if (cnt[0] >= 2 && cnt[1] >= 2)
        deleted2 = true;
      else if (cnt[b] > 4)
        dangerous2 = true;
    }
    bool broken = !deleted2 && troubled.empty() && (cnt[0] < 2 || cnt[1] < 2);
    if (!broken) {
      expect_rep = rep;
      expect_colors = colors;
      expect_troubled = troubled;
    }
  }
  REQUIRE(expect_rep >= 0);

  const auto& ph2 = ctx.phase2(5);
  CHECK(ph2.rep == expect_rep);
  CHECK(ph2.colors == expect_colors);
  CHECK(std::set<var_id>(ph2.troubled2.begin(), ph2.troubled2.end()) == expect_troubled);
}

TEST_CASE("phase-2 decisions through the live pipeline are oblivious and valid") {
  // a single wide clause makes phase-1 dangerous events likely enough to
  // find seeds whose decision goes past phase 1
  formula f = formula::parse_dimacs("p cnf 8 1\n1 2 3 4 5 6 7 8 0\n");
  int engaged = 0;
  for (std::uint64_t si = 0; si < 4000 && engaged < 3; ++si) {
    seed s = seed::from_u64(910000 + si);
    marking_result mr = compute_marking(f, s, {});
    if (mr.failed) continue;
    bool past_phase1 = false;
    for (const auto& d : mr.decisions) past_phase1 |= d.phase >= 2;
    if (!past_phase1) continue;
    ++engaged;
    CHECK(validate_marking(f, mr.marked_vars(), marking_params{}.alpha).valid);
    // fresh context, reversed order: identical decisions including the rep
    marking_ctx ctx(f, s, {});
    for (auto it = mr.decisions.rbegin(); it != mr.decisions.rend(); ++it) {
      marking_decision again = ctx.decide(it->var);
      CHECK(again.marked == it->marked);
      CHECK(again.phase == it->phase);
      CHECK(again.phase2_rep == it->phase2_rep);
    }
  }
  CHECK(engaged == 3);
}
