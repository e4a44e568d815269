#include "lasat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ULL + b;
  x ^= x >> 29;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 32;
  return x;
}

struct prepared {
  formula f;
  seed sd;
  scan_schedule sched;
  margin_params par;
  double b = 0;
};

// Marking + oracle-derived theta for one (instance, seed). Returns nothing
// when the marking fails, is invalid, or the instance does not admit a
// two-sided marginal bound for every conditioning.
std::optional<prepared> prepare(const formula& f, const seed& sd, long long horizon_scale_m,
                                const marking_params& mp = {}) {
  marking_result mr = compute_marking(f, sd, mp);
  if (mr.failed) return std::nullopt;
  auto marked = mr.marked_vars();
  if (!validate_marking(f, marked, mp.alpha).valid) return std::nullopt;
  if (marked.empty()) return std::nullopt;
  auto lb = min_conditional_lb(f, marked);
  if (!lb.all_full_conditionings_feasible || lb.b <= 2e-9) return std::nullopt;

  prepared p{f, sd, scan_schedule::from_marked(marked), {}, lb.b};
  p.par.theta = lb.b - 1e-9;
  p.par.horizon = horizon_scale_m * p.sched.m();
  p.par.r_cap = default_r_cap(f.k_max(), f.max_degree(), f.var_count());
  return p;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

formula gen_formula(int n, int n_clauses, int k, int d_max, std::uint64_t gen_seed) {
  std::mt19937_64 rng(gen_seed);
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<int>> encoded;
  for (int c = 0; c < n_clauses; ++c) {
    std::vector<var_id> pool;
    for (var_id v = 1; v <= n; ++v)
      if (deg[static_cast<std::size_t>(v)] < d_max) pool.push_back(v);
    if (static_cast<int>(pool.size()) < k) break;
    std::vector<int> cl;
    for (int j = 0; j < k; ++j) {
      std::size_t pick = rng() % pool.size();
      var_id v = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      ++deg[static_cast<std::size_t>(v)];
      cl.push_back((rng() & 1) ? v : -v);
    }
    std::sort(cl.begin(), cl.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
    encoded.push_back(std::move(cl));
  }
  return formula::from_clauses(n, std::move(encoded));
}

formula example_formula() {
  return formula::parse_dimacs("p cnf 5 3\n1 2 -3 0\n-2 3 4 0\n-4 5 -1 0\n");
}

criterion_result criterion_coupling(const verify_options& o) {
  criterion_result res{1, "coupling exactness: margin_sample == forward_scan at X_0, T = 8m", false,
                       false, "", {}};
  long long compared = 0, mismatches = 0, skipped_seeds = 0, cap_skipped = 0;
  int instances_done = 0;
  std::uint64_t cand = 0;
  while (instances_done < o.coupling_instances && cand < 4000) {
    ++cand;
    int k = 4 + static_cast<int>(cand % 4);           // 4..7
    int n = 12 + static_cast<int>(cand % 9);          // 12..20
    int cls = std::max(3, (2 * n) / k);
    formula f = gen_formula(n, cls, k, 3, mix(o.base_seed, cand));
    if (f.clauses().size() < 3) continue;
    if (enumerate_sat(f).empty()) continue;

    bool used = false;
    for (int si = 0; si < o.coupling_seeds; ++si) {
      seed sd = seed::from_u64(mix(o.base_seed ^ 0xC0FFEE, cand * 131 + std::uint64_t(si)));
      auto p = prepare(f, sd, 8);
      if (!p) {
        ++skipped_seeds;
        continue;
      }
      std::vector<int> fwd = forward_scan(p->f, p->sched, p->sd, p->par);
      for (int j = 1; j <= p->sched.m(); ++j) {
        cttp_stats st;
        int back = margin_sample(p->f, p->sd, p->sched, p->par, p->sched.at(j), &st);
        if (st.cap_hits > 0) {
          ++cap_skipped;
          continue;
        }
        ++compared;
        if (back != fwd[static_cast<std::size_t>(j - 1)]) ++mismatches;
      }
      used = true;
    }
    if (used) ++instances_done;
  }
  res.pass = mismatches == 0 && compared > 0 && instances_done >= o.coupling_instances;
  res.detail = "instances=" + std::to_string(instances_done) +
               " compared=" + std::to_string(compared) +
               " mismatches=" + std::to_string(mismatches) +
               " skipped_seeds=" + std::to_string(skipped_seeds) +
               " cap_skipped=" + std::to_string(cap_skipped) + " (tolerance: 0 mismatches)";
  res.data = {{"instances", instances_done},
              {"compared", compared},
              {"mismatches", mismatches},
              {"skipped_seeds", skipped_seeds}};
  return res;
}

criterion_result criterion_joint_tv(const verify_options& o) {
  criterion_result res{2, "joint law of sample_many vs uniform over satisfying assignments", false,
                       false, "", {}};
  formula f = example_formula();
  auto sat = enumerate_sat(f);

  std::map<std::vector<std::uint8_t>, double> oracle_counts;
  for (assignment_mask x : sat) {
    std::vector<std::uint8_t> key;
    for (var_id v = 1; v <= f.var_count(); ++v)
      key.push_back(static_cast<std::uint8_t>(assignment_value(x, v, f.var_count())));
    oracle_counts[key] = 1.0;
  }
  auto oracle = exact_distribution::from_counts(oracle_counts);

  long long failures = 0;
  std::vector<std::vector<std::uint8_t>> samples;
  samples.reserve(static_cast<std::size_t>(o.tv_samples));
  std::vector<var_id> all_vars;
  for (var_id v = 1; v <= f.var_count(); ++v) all_vars.push_back(v);

  for (long long i = 0; i < o.tv_samples; ++i) {
    seed sd = seed::from_u64(mix(o.base_seed ^ 0x7157, std::uint64_t(i)));
    sampler_context probe(f, sd);  // marking first, to pin T = 64 m
    if (probe.marking_failed()) {
      ++failures;
      continue;
    }
    sampler_config cfg;
    cfg.horizon = 64LL * std::max(1, probe.schedule().m());
    sampler_context ctx(f, sd, cfg);
    batch_result batch = ctx.sample_many(all_vars);
    if (batch.failed) {
      ++failures;
      continue;
    }
    std::vector<std::uint8_t> key;
    for (const auto& r : batch.values) key.push_back(static_cast<std::uint8_t>(r.value));
    samples.push_back(std::move(key));
  }
  if (samples.empty()) {
    res.detail = "no successful seeds";
    return res;
  }
  double tv = tv_distance(empirical_distribution(samples), oracle);
  res.pass = tv <= o.tv_tolerance;
  res.detail = "samples=" + std::to_string(samples.size()) +
               " marking_failures=" + std::to_string(failures) + " sat_count=" +
               std::to_string(sat.size()) + " tv=" + fmt(tv) +
               " (tolerance " + fmt(o.tv_tolerance) + ")";
  res.data = {{"samples", samples.size()}, {"failures", failures}, {"tv", tv}};
  return res;
}

criterion_result criterion_memoryless(const verify_options& o) {
  criterion_result res{3, "memory-less consistency across query schedules", false, false, "", {}};
  long long checked = 0, violations = 0;
  for (int inst = 0; inst < o.consistency_instances; ++inst) {
    int k = 4 + inst % 3;
    int n = 8 + inst % 9;
    formula f = gen_formula(n, std::max(2, (2 * n) / k), k, 3,
                            mix(o.base_seed ^ 0x3333, std::uint64_t(inst)));
    for (int si = 0; si < o.consistency_seeds; ++si) {
      seed sd = seed::from_u64(mix(o.base_seed ^ 0x4444, std::uint64_t(inst * 1000 + si)));

      std::vector<var_id> asc;
      for (var_id v = 1; v <= n; ++v) asc.push_back(v);
      std::vector<var_id> desc(asc.rbegin(), asc.rend());
      std::vector<var_id> shuffled = asc;
      std::mt19937_64 rng(mix(sd.bytes[0], std::uint64_t(inst)));
      for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng() % i]);
      shuffled.insert(shuffled.end(), asc.begin(), asc.begin() + n / 2);  // duplicates

      auto run_schedule = [&](const std::vector<var_id>& sched) {
        std::map<var_id, std::string> out;
        sampler_context ctx(f, sd);
        for (var_id v : sched) {
          try {
            out[v] = std::to_string(ctx.sample(v).value);
          } catch (const error& e) {
            out[v] = std::string("error:") + errc_name(e.code());
          }
        }
        return out;
      };
      auto a = run_schedule(asc);
      auto b = run_schedule(desc);
      auto c = run_schedule(shuffled);
      ++checked;
      if (a != b || a != c) ++violations;
    }
  }
  res.pass = violations == 0 && checked == 1LL * o.consistency_instances * o.consistency_seeds;
  res.detail = "instance-seed pairs=" + std::to_string(checked) +
               " violations=" + std::to_string(violations) + " (tolerance: exact)";
  res.data = {{"checked", checked}, {"violations", violations}};
  return res;
}

criterion_result criterion_marking(const verify_options& o) {
  criterion_result res{4, "marking validity and query-obliviousness", false, false, "", {}};
  int succeeded = 0, failed = 0, invalid_after_success = 0, oblivious_violations = 0;
  for (int inst = 0; inst < o.marking_instances; ++inst) {
    int k = 3 + inst % 6;  // 3..8
    int n = 8 + inst % 13;
    formula f = gen_formula(n, std::max(2, (2 * n) / k), k, 3,
                            mix(o.base_seed ^ 0x5555, std::uint64_t(inst)));
    seed sd = seed::from_u64(mix(o.base_seed ^ 0x6666, std::uint64_t(inst)));
    marking_result mr = compute_marking(f, sd, {});
    if (mr.failed) {
      ++failed;
      continue;
    }
    ++succeeded;
    if (!validate_marking(f, mr.marked_vars(), marking_params{}.alpha).valid)
      ++invalid_after_success;

    // fresh context, permuted query order
    marking_ctx ctx(f, sd, {});
    std::vector<var_id> perm;
    for (var_id v = 1; v <= n; ++v) perm.push_back(v);
    std::mt19937_64 rng(mix(o.base_seed, std::uint64_t(inst) * 7 + 3));
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
    for (var_id v : perm) {
      try {
        if (ctx.is_marked(v) != (mr.marked[static_cast<std::size_t>(v)] == 1))
          ++oblivious_violations;
      } catch (const error&) {
        ++oblivious_violations;  // ascending order succeeded, permuted order must too
      }
    }
  }
  res.pass = invalid_after_success == 0 && oblivious_violations == 0;
  res.detail = "instances=" + std::to_string(o.marking_instances) +
               " phase_failures=" + std::to_string(failed) +
               " succeeded=" + std::to_string(succeeded) +
               " invalid_markings=" + std::to_string(invalid_after_success) +
               " obliviousness_violations=" + std::to_string(oblivious_violations) +
               " (tolerance: exact where phases succeed)";
  res.data = {{"failed", failed},
              {"succeeded", succeeded},
              {"invalid", invalid_after_success},
              {"oblivious_violations", oblivious_violations}};
  return res;
}

criterion_result criterion_lb_law(const verify_options& o) {
  criterion_result res{5, "lower-bound sampler law at theta = 0.4", false, false, "", {}};
  formula f = formula::parse_dimacs("p cnf 1 0\n");
  scan_schedule sched = scan_schedule::from_marked({1});
  margin_params par;
  par.theta = 0.4;
  par.r_cap = 1LL << 60;

  long long cnt[3] = {0, 0, 0};
  const long long chunk = 50000;  // fresh contexts bound the memo size
  par.horizon = o.lb_samples + chunk + 10;
  seed sd = seed::from_u64(o.base_seed ^ 0x1B);
  long long t = -1;
  for (long long done = 0; done < o.lb_samples;) {
    glauber_ctx ctx(f, sd, sched, par);
    for (long long i = 0; i < chunk && done < o.lb_samples; ++i, ++done, --t)
      ++cnt[static_cast<int>(ctx.lb_sample(t))];
  }
  double n = static_cast<double>(o.lb_samples);
  double f0 = cnt[0] / n, f1 = cnt[1] / n, fbot = cnt[2] / n;
  res.pass = std::abs(f0 - 0.4) <= o.lb_tolerance && std::abs(f1 - 0.4) <= o.lb_tolerance &&
             std::abs(fbot - 0.2) <= o.lb_tolerance;
  res.detail = "freq0=" + fmt(f0) + " freq1=" + fmt(f1) + " freq_bot=" + fmt(fbot) +
               " (targets 0.4/0.4/0.2 within " + fmt(o.lb_tolerance) + ")";
  res.data = {{"freq0", f0}, {"freq1", f1}, {"freq_bot", fbot}};
  return res;
}

criterion_result criterion_padding(const verify_options& o) {
  criterion_result res{6, "padding distribution exactness and normalization", false, false, "", {}};
  // q1 = 2/3 over {(1,0),(1,1),(0,0)} for the clause (x1 v -x3); theta = 1/4
  formula f = example_formula();
  partial_assignment sigma(f.var_count());
  sigma.set_bit(2, 0);
  sigma.set_bit(5, 1);
  component psi = component_of(f, sigma, 1);
  padding_result pr = padding_prob(psi, 1, sigma, 0.25);
  bool exact_ok = std::abs(pr.p1 - 5.0 / 6.0) <= 1e-12 && std::abs(pr.q1 - 2.0 / 3.0) <= 1e-12;

  bool theta_reject_ok = false;
  try {
    padding_prob(psi, 1, sigma, 0.45);
  } catch (const error& e) {
    theta_reject_ok = e.code() == errc::invalid_theta;
  }

  int checked = 0;
  double worst = 0;
  std::uint64_t cand = 0;
  while (checked < 100 && cand < 3000) {
    ++cand;
    int k = 3 + static_cast<int>(cand % 4);
    int n = 6 + static_cast<int>(cand % 5);
    formula g = gen_formula(n, std::max(2, n / 2), k, 3, mix(o.base_seed ^ 0xAAAA, cand));
    if (enumerate_sat(g).empty()) continue;
    partial_assignment empty(g.var_count());
    var_id u = 1 + static_cast<int>(cand % n);
    component comp = component_of(g, empty, u);
    double q1;
    try {
      q1 = padding_prob(comp, u, empty, 1e-6).q1;
    } catch (const error&) {
      continue;
    }
    double side = std::min(q1, 1 - q1);
    if (side <= 1e-9) continue;
    double theta = 0.9 * side;
    double p1 = padding_prob(comp, u, empty, theta).p1;
    double p0 = ((1 - q1) - theta) / (1 - 2 * theta);
    worst = std::max(worst, std::abs(p1 + p0 - 1.0));
    ++checked;
  }
  res.pass = exact_ok && theta_reject_ok && checked >= 100 && worst <= 1e-12;
  res.detail = "p1=" + fmt(pr.p1) + " (expected 5/6 within 1e-12), invalid-theta rejected=" +
               (theta_reject_ok ? "yes" : "no") + ", normalization checked on " +
               std::to_string(checked) + " components, worst deviation=" + fmt(worst);
  res.data = {{"p1", pr.p1}, {"normalization_worst", worst}, {"checked", checked}};
  return res;
}

criterion_result criterion_conn(const verify_options& o) {
  criterion_result res{7, "conn agrees with the component of the materialized assignment", false,
                       false, "", {}};
  long long compared = 0, mismatches = 0;
  int instances_done = 0;
  std::uint64_t cand = 0;
  while (instances_done < o.conn_instances && cand < 4000) {
    ++cand;
    int k = 4 + static_cast<int>(cand % 4);
    int n = 10 + static_cast<int>(cand % 8);
    formula f = gen_formula(n, std::max(3, (2 * n) / k), k, 3, mix(o.base_seed ^ 0xBBBB, cand));
    if (enumerate_sat(f).empty()) continue;
    seed sd = seed::from_u64(mix(o.base_seed ^ 0xCCCC, cand));
    auto p = prepare(f, sd, 64);
    if (!p) continue;

    partial_assignment tau(f.var_count());
    for (var_id u : p->sched.order)
      tau.set_bit(u, margin_sample(f, sd, p->sched, p->par, u));

    bool any = false;
    for (var_id v = 1; v <= n; ++v) {
      if (p->sched.contains(v)) continue;
      conn_result cr = conn(f, sd, p->sched, p->par, v);
      component direct = component_of(f, tau, v);
      ++compared;
      any = true;
      if (!(cr.comp == direct)) ++mismatches;
    }
    if (any) ++instances_done;
  }
  res.pass = mismatches == 0 && instances_done >= o.conn_instances;
  res.detail = "instances=" + std::to_string(instances_done) +
               " unmarked_vars_compared=" + std::to_string(compared) +
               " mismatches=" + std::to_string(mismatches) + " (tolerance: exact)";
  res.data = {{"instances", instances_done}, {"compared", compared}, {"mismatches", mismatches}};
  return res;
}

criterion_result criterion_conditions(const verify_options&) {
  criterion_result res{8, "constants verification at k = 10^4, d = 2^25", false, false, "", {}};
  marking_params mp;  // alpha = 1/75, beta1 = 0.778, beta2 = 0.96
  conditions_report eq1 = check_conditions_marking(1e4, 25.0, mp, 10000);
  conditions_report eq2 = check_conditions_margin(1e4, 25.0, mp.alpha);

  bool monotone = false;
  std::string failing;
  for (const auto& c : eq1.checks) {
    if (c.name.find("decreasing") != std::string::npos) monotone = c.pass;
    if (!c.pass) failing += " [" + c.name + " slack=" + fmt(c.slack) + "]";
  }
  for (const auto& c : eq2.checks)
    if (!c.pass) failing += " [" + c.name + " slack=" + fmt(c.slack) + "]";

  res.pass = eq1.all_pass && eq2.all_pass && monotone;
  res.detail = std::string("monotonicity=") + (monotone ? "pass" : "fail") +
               (failing.empty() ? " all inequalities pass"
                                : " failing inequalities (log2 slack):" + failing);
  res.data = {{"marking_conditions", to_json(eq1)},
              {"margin_conditions", to_json(eq2)},
              {"monotonicity", monotone}};
  return res;
}

criterion_result criterion_monitored(const verify_options& o) {
  criterion_result res{9, "monitored statistics: |R| tail and component clause counts", true, true,
                       "", {}};
  std::vector<long long> r_sizes;
  std::vector<int> comp_clauses;
  int kd_max = 0;
  double log2n_sq = 0;
  int k_used = 0, d_used = 0;

  std::uint64_t cand = 0;
  int instances = 0;
  while (instances < 20 && cand < 2000) {
    ++cand;
    int k = 4 + static_cast<int>(cand % 4);
    int n = 12 + static_cast<int>(cand % 8);
    formula f = gen_formula(n, std::max(3, (2 * n) / k), k, 3, mix(o.base_seed ^ 0xDDDD, cand));
    if (enumerate_sat(f).empty()) continue;
    seed sd = seed::from_u64(mix(o.base_seed ^ 0xEEEE, cand));
    auto p = prepare(f, sd, 64);
    if (!p) continue;
    ++instances;
    kd_max = std::max(kd_max, f.k_max() * f.max_degree());
    k_used = std::max(k_used, f.k_max());
    d_used = std::max(d_used, f.max_degree());
    log2n_sq = std::max(log2n_sq, std::pow(std::log2(double(n)), 2));
    for (int j = 1; j <= p->sched.m(); ++j) {
      cttp_stats st;
      margin_sample(f, sd, p->sched, p->par, p->sched.at(j), &st);
      r_sizes.push_back(st.final_r);
    }
    partial_assignment tau(f.var_count());
    for (var_id u : p->sched.order) tau.set_bit(u, margin_sample(f, sd, p->sched, p->par, u));
    for (var_id v = 1; v <= n; ++v) {
      if (p->sched.contains(v)) continue;
      comp_clauses.push_back(
          static_cast<int>(conn(f, sd, p->sched, p->par, v).comp.clauses.size()));
    }
  }

  json tail = json::array();
  double dk4 = 24.0 * d_used * std::pow(double(k_used), 4);
  for (int eta = 1; eta <= 8; ++eta) {
    double threshold = dk4 * (eta + 1);
    long long above = 0;
    for (long long r : r_sizes)
      if (static_cast<double>(r) >= threshold) ++above;
    tail.push_back({{"eta", eta},
                    {"threshold", threshold},
                    {"empirical", r_sizes.empty() ? 0.0 : double(above) / double(r_sizes.size())},
                    {"bound", std::pow(2.0, -eta)}});
  }
  long long r_max = 0, r_sum = 0;
  for (long long r : r_sizes) {
    r_max = std::max(r_max, r);
    r_sum += r;
  }
  int comp_max = 0;
  for (int c : comp_clauses) comp_max = std::max(comp_max, c);
  double comp_bound = kd_max * log2n_sq;

  res.detail = "margin_calls=" + std::to_string(r_sizes.size()) + " |R| mean=" +
               fmt(r_sizes.empty() ? 0.0 : double(r_sum) / double(r_sizes.size())) +
               " max=" + std::to_string(r_max) + "; component clauses max=" +
               std::to_string(comp_max) + " vs kd log^2 n = " + fmt(comp_bound);
  res.data = {{"r_tail", tail},
              {"r_max", r_max},
              {"component_clauses_max", comp_max},
              {"component_bound_kd_log2_n", comp_bound}};
  return res;
}

std::vector<criterion_result> run_all_criteria(const verify_options& o) {
  return {criterion_coupling(o),  criterion_joint_tv(o), criterion_memoryless(o),
          criterion_marking(o),   criterion_lb_law(o),   criterion_padding(o),
          criterion_conn(o),      criterion_conditions(o), criterion_monitored(o)};
}

json verify_file_suite(const formula& f, const sampler_config& cfg, const std::string& suite,
                       const verify_options& o) {
  json out;
  out["suite"] = suite;
  bool pass = true;

  if (suite == "coupling") {
    long long compared = 0, mismatches = 0, skipped = 0;
    for (int si = 0; si < 50; ++si) {
      seed sd = seed::from_u64(mix(o.base_seed ^ 0xF11E, std::uint64_t(si)));
      auto p = prepare(f, sd, 8, cfg.marking);
      if (!p) {
        ++skipped;
        continue;
      }
      auto fwd = forward_scan(p->f, p->sched, p->sd, p->par);
      for (int j = 1; j <= p->sched.m(); ++j) {
        cttp_stats st;
        int back = margin_sample(f, sd, p->sched, p->par, p->sched.at(j), &st);
        if (st.cap_hits > 0) continue;
        ++compared;
        if (back != fwd[static_cast<std::size_t>(j - 1)]) ++mismatches;
      }
    }
    pass = mismatches == 0 && compared > 0;
    out["compared"] = compared;
    out["mismatches"] = mismatches;
    out["skipped_seeds"] = skipped;
  } else if (suite == "marking") {
    int succeeded = 0, failed = 0, invalid = 0;
    for (int si = 0; si < 50; ++si) {
      seed sd = seed::from_u64(mix(o.base_seed ^ 0xAB1E, std::uint64_t(si)));
      marking_result mr = compute_marking(f, sd, cfg.marking);
      if (mr.failed) {
        ++failed;
        continue;
      }
      ++succeeded;
      if (!validate_marking(f, mr.marked_vars(), cfg.marking.alpha).valid) ++invalid;
    }
    pass = invalid == 0;
    out["succeeded"] = succeeded;
    out["failed"] = failed;
    out["invalid"] = invalid;
    out["validity_rate"] =
        succeeded + failed == 0 ? 0.0 : double(succeeded) / double(succeeded + failed);
  } else if (suite == "tv") {
    auto sat = enumerate_sat(f);
    if (sat.empty()) fail(errc::no_satisfying_assignment, "instance is unsatisfiable");
    std::map<std::vector<std::uint8_t>, double> oc;
    for (assignment_mask x : sat) {
      std::vector<std::uint8_t> key;
      for (var_id v = 1; v <= f.var_count(); ++v)
        key.push_back(static_cast<std::uint8_t>(assignment_value(x, v, f.var_count())));
      oc[key] = 1.0;
    }
    std::vector<var_id> all_vars;
    for (var_id v = 1; v <= f.var_count(); ++v) all_vars.push_back(v);
    long long failures = 0;
    std::vector<std::vector<std::uint8_t>> samples;
    for (long long i = 0; i < o.tv_samples; ++i) {
      seed sd = seed::from_u64(mix(o.base_seed ^ 0x2757, std::uint64_t(i)));
      sampler_context ctx(f, sd, cfg);
      auto batch = ctx.sample_many(all_vars);
      if (batch.failed) {
        ++failures;
        continue;
      }
      std::vector<std::uint8_t> key;
      for (const auto& r : batch.values) key.push_back(static_cast<std::uint8_t>(r.value));
      samples.push_back(std::move(key));
    }
    double tv = samples.empty() ? 1.0
                                : tv_distance(empirical_distribution(samples),
                                              exact_distribution::from_counts(oc));
    pass = tv <= o.tv_tolerance;
    out["samples"] = samples.size();
    out["failures"] = failures;
    out["tv"] = tv;
    out["tolerance"] = o.tv_tolerance;
  } else if (suite == "all") {
    json parts = json::array();
    for (const char* s : {"coupling", "marking", "tv"}) {
      json part = verify_file_suite(f, cfg, s, o);
      pass = pass && part["pass"].get<bool>();
      parts.push_back(std::move(part));
    }
    out["suites"] = parts;
  } else {
    fail(errc::bad_config, "unknown suite: " + suite);
  }
  out["pass"] = pass;
  return out;
}

}  // namespace lasat
