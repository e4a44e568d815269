#include <doctest.h>

#include <map>
#include <set>

#include "lasat/component.hpp"
#include "lasat/errors.hpp"
#include "lasat/marking.hpp"
#include "lasat/oracle.hpp"
#include "lasat/verify.hpp"

using namespace lasat;

namespace {

struct example_session {
  formula f = example_formula();
  seed s;
  scan_schedule sched;
  margin_params par;
};

// a seed whose marking is {2, 5} and whose margin samples give
// sigma(x2) = 0, sigma(x5) = 1, reproducing the worked walkthrough
example_session find_walkthrough_seed() {
  example_session es;
  for (std::uint64_t si = 0;; ++si) {
    REQUIRE(si < 20000);
    seed s = seed::from_u64(si);
    marking_result mr = compute_marking(es.f, s, {});
    if (mr.failed) continue;
    if (mr.marked_vars() != std::vector<var_id>{2, 5}) continue;
    auto lb = min_conditional_lb(es.f, mr.marked_vars());
    if (lb.b <= 2e-9) continue;
    scan_schedule sched = scan_schedule::from_marked(mr.marked_vars());
    margin_params par;
    par.theta = lb.b - 1e-9;
    par.horizon = 64 * sched.m();
    par.r_cap = 1LL << 40;
    if (margin_sample(es.f, s, sched, par, 2) != 0) continue;
    if (margin_sample(es.f, s, sched, par, 5) != 1) continue;
    es.s = s;
    es.sched = sched;
    es.par = par;
    return es;
  }
}

}  // namespace

TEST_CASE("conn reproduces the worked walkthrough") {
  example_session es = find_walkthrough_seed();

  conn_result r1 = conn(es.f, es.s, es.sched, es.par, 1);
  CHECK(r1.sigma.value(2) == 0);
  CHECK(r1.sigma.value(5) == 1);
  CHECK(r1.comp.vars == std::vector<var_id>{1, 3});
  REQUIRE(r1.comp.clauses.size() == 1);
  CHECK(r1.comp.clauses[0].orig_id == 0);
  REQUIRE(r1.comp.clauses[0].lits.size() == 2);
  CHECK(r1.comp.clauses[0].lits[0].var == 1);
  CHECK(r1.comp.clauses[0].lits[0].positive);
  CHECK(r1.comp.clauses[0].lits[1].var == 3);
  CHECK_FALSE(r1.comp.clauses[0].lits[1].positive);

  // x4 only appears in clauses satisfied by the drawn marked values
  conn_result r4 = conn(es.f, es.s, es.sched, es.par, 4);
  CHECK(r4.comp.vars == std::vector<var_id>{4});
  CHECK(r4.comp.clauses.empty());

  // each clause enters the stack at most once
  std::set<int> uniq(r1.visited.begin(), r1.visited.end());
  CHECK(uniq.size() == r1.visited.size());

  CHECK_THROWS_AS(conn(es.f, es.s, es.sched, es.par, 2), error);  // marked variable
}

TEST_CASE("conn sigma values equal direct margin_sample calls") {
  example_session es = find_walkthrough_seed();
  conn_result r1 = conn(es.f, es.s, es.sched, es.par, 1);
  for (var_id u : es.sched.order)
    if (r1.sigma.assigned(u))
      CHECK(r1.sigma.value(u) == margin_sample(es.f, es.s, es.sched, es.par, u));
}

TEST_CASE("conn equals component_of over the materialized assignment") {
  example_session es = find_walkthrough_seed();
  partial_assignment tau(es.f.var_count());
  for (var_id u : es.sched.order)
    tau.set_bit(u, margin_sample(es.f, es.s, es.sched, es.par, u));
  for (var_id v = 1; v <= es.f.var_count(); ++v) {
    if (es.sched.contains(v)) continue;
    CHECK(conn(es.f, es.s, es.sched, es.par, v).comp == component_of(es.f, tau, v));
  }
}

TEST_CASE("conn clause cap surfaces ComponentTooLarge") {
  example_session es = find_walkthrough_seed();
  conn_params cp;
  cp.clause_cap = 0;  // auto: generous
  CHECK_NOTHROW(conn(es.f, es.s, es.sched, es.par, 1, cp));

  conn_params tiny;
  tiny.clause_cap = -1;  // below any exploration
  try {
    conn(es.f, es.s, es.sched, es.par, 1, tiny);
    FAIL("expected ComponentTooLarge");
  } catch (const error& e) {
    CHECK(e.code() == errc::component_too_large);
  }
}

TEST_CASE("uniform_sample_component frequencies on the example component") {
  formula f = example_formula();
  partial_assignment sigma(5);
  sigma.set_bit(2, 0);
  sigma.set_bit(5, 1);
  component comp = component_of(f, sigma, 1);  // (x1 v -x3): {(0,0),(1,0),(1,1)}

  std::map<std::pair<int, int>, int> freq;
  const int n = 30000;
  for (int si = 0; si < n; ++si) {
    auto full = uniform_sample_component(seed::from_u64(123000 + std::uint64_t(si)), comp);
    REQUIRE(full.size() == 2);
    freq[{full[0].second, full[1].second}]++;
  }
  CHECK(freq.size() == 3);
  for (const auto& [key, cnt] : freq) {
    CHECK_FALSE((key.first == 0 && key.second == 1));  // (0,1) falsifies the clause
    CHECK(std::abs(double(cnt) / n - 1.0 / 3.0) <= 0.01);
  }
}

TEST_CASE("singleton components draw a fair bit") {
  formula f = example_formula();
  partial_assignment sigma(5);
  sigma.set_bit(2, 0);
  sigma.set_bit(5, 1);
  component lone = component_of(f, sigma, 4);
  int ones = 0;
  const int n = 20000;
  for (int si = 0; si < n; ++si) {
    auto full = uniform_sample_component(seed::from_u64(321000 + std::uint64_t(si)), lone);
    REQUIRE(full.size() == 1);
    ones += full[0].second;
  }
  CHECK(std::abs(double(ones) / n - 0.5) <= 0.015);
}

TEST_CASE("uniform_sample_component error paths") {
  component dead;
  dead.vars = {1, 2};
  dead.clauses.push_back({0, {{1, true}, {2, true}}});
  dead.clauses.push_back({1, {{1, true}, {2, false}}});
  dead.clauses.push_back({2, {{1, false}, {2, true}}});
  dead.clauses.push_back({3, {{1, false}, {2, false}}});
  CHECK_THROWS_AS(uniform_sample_component(seed::from_u64(1), dead), error);

  component wide;
  wide.vars = {1, 2, 3};
  wide.clauses.push_back({0, {{1, true}, {2, true}, {3, true}}});
  CHECK_THROWS_AS(uniform_sample_component(seed::from_u64(1), wide, 2), error);
}

TEST_CASE("queries landing in one component share the extension") {
  example_session es = find_walkthrough_seed();
  conn_result a = conn(es.f, es.s, es.sched, es.par, 1);
  conn_result b = conn(es.f, es.s, es.sched, es.par, 3);
  CHECK(a.comp == b.comp);
  CHECK(uniform_sample_component(es.s, a.comp) == uniform_sample_component(es.s, b.comp));
}
