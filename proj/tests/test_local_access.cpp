#include <doctest.h>

#include <map>
#include <thread>
#include <vector>

#include "lasat/errors.hpp"
#include "lasat/local_access.hpp"
#include "lasat/verify.hpp"

using namespace lasat;

TEST_CASE("sample is deterministic and dispatches by marking") {
  formula f = example_formula();
  int checked = 0;
  for (std::uint64_t si = 0; si < 60; ++si) {
    seed s = seed::from_u64(5000 + si);
    sampler_context ctx(f, s);
    if (ctx.marking_failed()) continue;
    ++checked;
    for (var_id v = 1; v <= 5; ++v) {
      sample_result a = ctx.sample(v);
      sample_result b = ctx.sample(v);
      CHECK(a.value == b.value);
      CHECK(a.marked == ctx.schedule().contains(v));
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("sample_many is order- and duplicate-invariant") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 30; ++si) {
    seed s = seed::from_u64(6000 + si);
    sampler_context ctx(f, s);
    if (ctx.marking_failed()) continue;
    batch_result a = ctx.sample_many({1, 2});
    batch_result b = ctx.sample_many({2, 1, 1});
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CHECK(a.values[i].var == b.values[i].var);
      CHECK(a.values[i].value == b.values[i].value);
    }
  }
}

TEST_CASE("batch restricted to marked variables equals margin_sample") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 30; ++si) {
    seed s = seed::from_u64(7000 + si);
    sampler_context ctx(f, s);
    if (ctx.marking_failed()) continue;
    std::vector<var_id> all{1, 2, 3, 4, 5};
    batch_result br = ctx.sample_many(all);
    REQUIRE_FALSE(br.failed);
    for (const auto& r : br.values) {
      if (!r.marked) continue;
      CHECK(r.value == margin_sample(f, s, ctx.schedule(), ctx.margin(), r.var));
    }
  }
}

TEST_CASE("assembled assignments satisfy the formula") {
  auto satisfies = [](const formula& f, const std::map<var_id, int>& x) {
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (const auto& l : c.lits) sat |= l.satisfied_by(x.at(l.var));
      if (!sat) return false;
    }
    return true;
  };

  formula ex = example_formula();
  int done = 0;
  for (std::uint64_t si = 0; si < 400 && done < 150; ++si) {
    seed s = seed::from_u64(8000 + si);
    sampler_context ctx(ex, s);
    if (ctx.marking_failed()) continue;
    batch_result br = ctx.sample_many({1, 2, 3, 4, 5});
    REQUIRE_FALSE(br.failed);
    std::map<var_id, int> x;
    for (const auto& r : br.values) x[r.var] = r.value;
    CHECK(satisfies(ex, x));
    ++done;
  }
  CHECK(done == 150);

  // a couple of random instances too
  for (int inst = 0; inst < 4; ++inst) {
    formula f = gen_formula(12, 6, 4, 3, 987000 + std::uint64_t(inst));
    if (enumerate_sat(f).empty()) continue;
    std::vector<var_id> all;
    for (var_id v = 1; v <= f.var_count(); ++v) all.push_back(v);
    for (std::uint64_t si = 0; si < 60; ++si) {
      seed s = seed::from_u64(9000 + 100 * inst + si);
      sampler_context ctx(f, s);
      if (ctx.marking_failed()) continue;
      batch_result br = ctx.sample_many(all);
      if (br.failed) continue;  // e.g. derived theta unavailable
      std::map<var_id, int> x;
      for (const auto& r : br.values) x[r.var] = r.value;
      CHECK(satisfies(f, x));
    }
  }
}

TEST_CASE("marking failure surfaces as a sampler failure, deterministically") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 200; ++si) {
    seed s = seed::from_u64(si);
    sampler_context ctx(f, s);
    if (!ctx.marking_failed()) continue;
    CHECK_THROWS_AS(ctx.sample(1), error);
    batch_result br = ctx.sample_many({1, 2, 3});
    CHECK(br.failed);
    return;
  }
  FAIL("no failing seed found in 200 tries");
}

TEST_CASE("variable out of range") {
  formula f = example_formula();
  sampler_context ctx(f, seed::from_u64(1));
  CHECK_THROWS_AS(ctx.sample(99), error);
}

TEST_CASE("theta override is honored and validated") {
  formula f = example_formula();
  sampler_config cfg;
  cfg.theta_override = 0.7;  // outside (0, 1/2)
  for (std::uint64_t si = 0; si < 50; ++si) {
    sampler_context ctx(f, seed::from_u64(si), cfg);
    if (ctx.marking_failed()) continue;
    CHECK_THROWS_AS(ctx.theta(), error);
    break;
  }
}

TEST_CASE("concurrent queries agree with sequential ones") {
  formula f = example_formula();
  seed s;
  bool found = false;
  for (std::uint64_t si = 0; si < 100 && !found; ++si) {
    s = seed::from_u64(40 + si);
    sampler_context probe(f, s);
    found = !probe.marking_failed();
  }
  REQUIRE(found);
  sampler_context ctx(f, s);
  std::vector<int> expected;
  for (var_id v = 1; v <= 5; ++v) expected.push_back(ctx.sample(v).value);

  std::vector<std::thread> workers;
  std::vector<std::vector<int>> got(8, std::vector<int>(5, -1));
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&, w] {
      for (var_id v = 1; v <= 5; ++v) got[static_cast<std::size_t>(w)][v - 1] = ctx.sample(v).value;
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& row : got)
    for (var_id v = 1; v <= 5; ++v) CHECK(row[static_cast<std::size_t>(v - 1)] == expected[v - 1]);
}

TEST_CASE("whole-formula fallback matches the direct component path") {
  formula f = example_formula();
  for (std::uint64_t si = 0; si < 80; ++si) {
    seed s = seed::from_u64(61000 + si);
    sampler_context direct(f, s);
    if (direct.marking_failed()) continue;

    sampler_config strangled;
    strangled.caps.conn_clause_cap = -1;  // every exploration overflows
    strangled.caps.whole_formula_fallback = true;
    sampler_context fallback(f, s, strangled);
    for (var_id v = 1; v <= 5; ++v)
      CHECK(direct.sample(v).value == fallback.sample(v).value);
    return;
  }
  FAIL("no succeeding seed found");
}

TEST_CASE("joint law on a random instance tracks the enumeration oracle") {
  // fixed instance beyond the k = 3 walkthrough shape
  formula f;
  std::size_t sat_count = 0;
  for (std::uint64_t g = 1;; ++g) {
    REQUIRE(g < 500);
    formula cand = gen_formula(8, 6, 4, 3, 0xFEED + g);
    if (cand.clauses().size() < 6) continue;
    auto sat = enumerate_sat(cand);
    if (sat.size() < 100 || sat.size() > 200) continue;
    f = cand;
    sat_count = sat.size();
    break;
  }

  std::map<std::vector<std::uint8_t>, double> oracle_counts;
  for (auto x : enumerate_sat(f)) {
    std::vector<std::uint8_t> key;
    for (var_id v = 1; v <= f.var_count(); ++v)
      key.push_back(static_cast<std::uint8_t>(assignment_value(x, v, f.var_count())));
    oracle_counts[key] = 1.0;
  }

  std::vector<var_id> all;
  for (var_id v = 1; v <= f.var_count(); ++v) all.push_back(v);
  std::vector<std::vector<std::uint8_t>> samples;
  long long failures = 0;
  for (std::uint64_t si = 0; si < 60000; ++si) {
    sampler_context ctx(f, seed::from_u64(0xABBA0000 + si));
    if (ctx.marking_failed()) {
      ++failures;
      continue;
    }
    batch_result br = ctx.sample_many(all);
    if (br.failed) {
      ++failures;
      continue;
    }
    std::vector<std::uint8_t> key;
    for (const auto& r : br.values) key.push_back(static_cast<std::uint8_t>(r.value));
    samples.push_back(std::move(key));
  }
  REQUIRE(samples.size() > 20000);
  double tv = tv_distance(empirical_distribution(samples),
                          exact_distribution::from_counts(oracle_counts));
  INFO("sat_count=", sat_count, " samples=", samples.size(), " failures=", failures,
       " tv=", tv);
  CHECK(tv <= 0.045);
}
