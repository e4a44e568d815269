#include "lasat/local_access.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "lasat/errors.hpp"

namespace lasat {

sampler_context::sampler_context(formula f, seed s, sampler_config cfg)
    : f_(std::move(f)), seed_(s), cfg_(cfg) {
  marking_ = compute_marking(f_, seed_, cfg_.marking);
  if (!marking_.failed) {
    auto val = validate_marking(f_, marking_.marked_vars(), cfg_.marking.alpha);
    if (!val.valid) {
      marking_.failed = true;
      marking_.failure = "MarkingInvalid: phases succeeded but the marking misses a threshold";
    }
  }
  sched_ = scan_schedule::from_marked(marking_.marked_vars());

  margin_.component_enum_cap = cfg_.caps.component_enum_cap;
  margin_.horizon = cfg_.horizon > 0 ? cfg_.horizon : default_horizon(sched_.m(), f_.var_count());
  margin_.r_cap =
      cfg_.r_cap > 0 ? cfg_.r_cap : default_r_cap(f_.k_max(), f_.max_degree(), f_.var_count());

  if (cfg_.theta_override) {
    margin_.theta = *cfg_.theta_override;
    theta_valid_ = margin_.theta > 0.0 && margin_.theta < 0.5;
    if (!theta_valid_) theta_error_ = "theta override outside (0, 1/2)";
    return;
  }
  if (marking_.failed) {
    theta_error_ = "marking failed, no theta derivation";
    return;
  }
  if (sched_.m() == 0) {  // nothing marked; theta is never consulted
    margin_.theta = 0.25;
    theta_valid_ = true;
    return;
  }

  theta_info ti = theta_default(f_.k_max(), f_.max_degree(), cfg_.marking.alpha);
  double theta = ti.meets_min ? ti.value : -1.0;
  if (f_.var_count() <= cfg_.caps.oracle_cap) {
    try {
      auto lb = min_conditional_lb(f_, sched_.order, true, 0, 1, cfg_.caps.oracle_cap);
      derived_b_ = lb.b;
      double cand = lb.b - 1e-9;
      theta = theta > 0 ? std::min(theta, cand) : cand;
    } catch (const error& e) {
      theta_error_ = e.what();
      return;
    }
  }
  if (theta > 0.0 && theta < 0.5) {
    margin_.theta = theta;
    theta_valid_ = true;
  } else {
    theta_error_ = "no valid theta: default formula invalid at this (k, d) and the oracle bound is " +
                   std::to_string(theta);
  }
}

double sampler_context::theta() const {
  if (!theta_valid_) fail(errc::invalid_theta, theta_error_);
  return margin_.theta;
}

const margin_params& sampler_context::margin() const {
  if (!theta_valid_) fail(errc::invalid_theta, theta_error_);
  return margin_;
}

sample_result sampler_context::sample(var_id v) const {
  if (v < 1 || v > f_.var_count())
    fail(errc::variable_out_of_range, "variable " + std::to_string(v) + " out of range");
  if (marking_.failed) fail(errc::sampler_failure, marking_.failure);

  sample_result res;
  res.var = v;
  res.marked = marking_.marked[static_cast<std::size_t>(v)] == 1;

  if (res.marked) {
    cttp_stats st;
    res.value = margin_sample(f_, seed_, sched_, margin(), v, &st);
    res.final_r = st.final_r;
    res.cap_hits = st.cap_hits;
    res.max_depth = st.max_depth;
    for (int c : st.psi_clauses) res.component_clauses = std::max(res.component_clauses, c);
    for (int c : st.psi_vars) res.component_vars = std::max(res.component_vars, c);
    return res;
  }

  conn_params cp;
  cp.clause_cap = cfg_.caps.conn_clause_cap;
  conn_result cr;
  try {
    cr = conn(f_, seed_, sched_, margin(), v, cp);
  } catch (const error& e) {
    if (e.code() == errc::component_too_large && cfg_.caps.whole_formula_fallback) {
      // materialize the full marked assignment and take v's true component
      partial_assignment tau(f_.var_count());
      for (var_id u : sched_.order) tau.set_bit(u, margin_sample(f_, seed_, sched_, margin(), u));
      component comp = component_of(f_, tau, v);
      auto full = uniform_sample_component(seed_, comp, cfg_.caps.component_enum_cap);
      for (const auto& [w, val] : full)
        if (w == v) res.value = val;
      res.component_clauses = static_cast<int>(comp.clauses.size());
      res.component_vars = static_cast<int>(comp.vars.size());
      return res;
    }
    throw;
  }
  res.final_r = cr.margin_stats.final_r;
  res.cap_hits = cr.margin_stats.cap_hits;
  res.max_depth = cr.margin_stats.max_depth;
  res.component_clauses = static_cast<int>(cr.comp.clauses.size());
  res.component_vars = static_cast<int>(cr.comp.vars.size());

  auto full = uniform_sample_component(seed_, cr.comp, cfg_.caps.component_enum_cap);
  for (const auto& [w, val] : full) {
    if (w == v) {
      res.value = val;
      return res;
    }
  }
  fail(errc::sampler_failure, "component sample misses the queried variable");
}

batch_result sampler_context::sample_many(std::vector<var_id> vars, int jobs) const {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  batch_result out;

  if (jobs <= 1 || vars.size() < 2) {
    for (var_id v : vars) {
      try {
        out.values.push_back(sample(v));
      } catch (const error& e) {
        out.failed = true;
        out.error = e.what();
        out.failed_var = v;
        break;
      }
    }
    return out;
  }

  std::vector<std::optional<sample_result>> slots(vars.size());
  std::vector<std::pair<var_id, std::string>> errors;
  std::mutex err_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= vars.size()) return;
      try {
        slots[i] = sample(vars[i]);
      } catch (const error& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.emplace_back(vars[i], e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min<int>(jobs, static_cast<int>(vars.size())); ++j)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    out.failed = true;
    out.failed_var = errors.front().first;
    out.error = errors.front().second;
  }
  for (auto& s : slots) {
    if (!s) break;  // partial results up to the first failure
    out.values.push_back(*s);
  }
  return out;
}

}  // namespace lasat
