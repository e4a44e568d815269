#include "lasat/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lasat/errors.hpp"

namespace lasat {

scan_schedule scan_schedule::from_marked(std::vector<var_id> marked) {
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  return {std::move(marked)};
}

int scan_schedule::index_of(var_id u) const {
  auto it = std::lower_bound(order.begin(), order.end(), u);
  if (it == order.end() || *it != u) return 0;
  return static_cast<int>(it - order.begin()) + 1;
}

long long default_horizon(int m, int n) {
  return 64LL * std::max(1, m) *
         static_cast<long long>(std::ceil(std::log(std::max(2, n) + 1.0)));
}

long long default_r_cap(int k, int d, int n) {
  double v = 80.0 * std::max(1, d) * std::pow(std::max(1, k), 4) * std::log(std::max(2, n));
  return static_cast<long long>(std::ceil(v));
}

int i_of(long long t, int m) {
  long long r = t % m;
  if (r < 0) r += m;
  return static_cast<int>(r) + 1;
}

long long pred_time(int u_index, long long t, int m) {
  int r = i_of(t, m);
  int diff = r - u_index;
  if (diff < 0) diff += m;
  return t - diff;
}

void cttp_state::record_memo(long long t, int value) {
  auto [it, inserted] = memo_.emplace(t, value);
  if (!inserted && it->second != value)
    fail(errc::sampler_failure, "memo overwrite at time " + std::to_string(t));
}

void cttp_state::record_lb(long long t, tri value) {
  auto [it, inserted] = lb_.emplace(t, value);
  if (!inserted && it->second != value)
    fail(errc::sampler_failure, "lower-bound record overwrite at time " + std::to_string(t));
}

padding_result padding_prob(const component& psi, var_id u, const partial_assignment& sigma,
                            double theta, int enum_cap) {
  if (sigma.var_count() >= u && sigma.assigned(u))
    fail(errc::variable_assigned, "padding variable is already assigned");
  if (!(theta > 0.0 && theta < 0.5))
    fail(errc::invalid_theta, "theta must lie in (0, 1/2), got " + std::to_string(theta));

  const auto& vars = psi.vars;
  const int nv = static_cast<int>(vars.size());
  if (nv > enum_cap)
    fail(errc::component_too_large, "component with " + std::to_string(nv) +
                                        " free variables exceeds enumeration cap " +
                                        std::to_string(enum_cap));
  auto pos_of = [&](var_id v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  int u_pos = pos_of(u);
  if (u_pos >= nv || vars[static_cast<std::size_t>(u_pos)] != u)
    fail(errc::variable_out_of_range, "variable not part of the component");

  struct masks {
    std::uint64_t pos = 0, neg = 0;
  };
  std::vector<masks> cms;
  for (const auto& rc : psi.clauses) {
    masks m;
    for (const auto& l : rc.lits) {
      std::uint64_t b = std::uint64_t(1) << pos_of(l.var);
      (l.positive ? m.pos : m.neg) |= b;
    }
    cms.push_back(m);
  }

  std::uint64_t total = 0, ones = 0;
  const std::uint64_t end = std::uint64_t(1) << nv;
  const std::uint64_t ubit = std::uint64_t(1) << u_pos;
  for (std::uint64_t x = 0; x < end; ++x) {
    bool sat = true;
    for (const auto& m : cms) {
      if ((x & m.pos) == 0 && (~x & m.neg) == 0) {
        sat = false;
        break;
      }
    }
    if (!sat) continue;
    ++total;
    if (x & ubit) ++ones;
  }
  if (total == 0)
    fail(errc::no_satisfying_assignment, "component has no satisfying assignment");

  padding_result r;
  r.q1 = double(ones) / double(total);
  if (r.q1 < theta || 1.0 - r.q1 < theta)
    fail(errc::invalid_theta, "theta=" + std::to_string(theta) +
                                  " does not lower-bound the conditional marginal q1=" +
                                  std::to_string(r.q1));
  r.p1 = (r.q1 - theta) / (1.0 - 2.0 * theta);
  r.p1 = std::clamp(r.p1, 0.0, 1.0);
  return r;
}

glauber_ctx::glauber_ctx(const formula& f, const seed& s, const scan_schedule& sched,
                         const margin_params& par)
    : f_(f), seed_(s), sched_(sched), par_(par) {
  if (sched_.m() == 0) fail(errc::sampler_failure, "empty scan schedule");
  if (!(par_.theta > 0.0 && par_.theta < 0.5))
    fail(errc::invalid_theta, "theta must lie in (0, 1/2), got " + std::to_string(par_.theta));
}

tri glauber_ctx::lb_sample(long long t) {
  const int m = sched_.m();
  var_id u = sched_.at(i_of(t, m));
  if (t <= -par_.horizon) return y_init(u) ? tri::one : tri::zero;  // pred_u(t) = t
  if (state_.has_lb(t)) return state_.lb(t);
  double x = u01(seed_, stream_key::lb_sample(t));
  tri out;
  if (x < 2 * par_.theta)
    out = x < par_.theta ? tri::zero : tri::one;  // floor(x / theta)
  else
    out = tri::bot;
  state_.record_lb(t, out);
  ++stats_.lb_draws;
  return out;
}

int glauber_ctx::run(long long t, long long depth) {
  ++stats_.glauber_calls;
  stats_.max_depth = std::max(stats_.max_depth, depth);
  const int m = sched_.m();
  const var_id u = sched_.at(i_of(t, m));

  if (t <= -par_.horizon) return y_init(u);
  if (state_.r_size() >= par_.r_cap) {
    ++stats_.cap_hits;
    return 1;
  }
  if (state_.has_memo(t)) return state_.memo(t);

  tri lb = lb_sample(t);
  if (lb != tri::bot) {
    int v = static_cast<int>(lb);
    state_.record_memo(t, v);
    return v;
  }

  // zone of indecision: grow (V', sigma) until every boundary clause is satisfied
  partial_assignment sigma(f_.var_count());
  std::vector<char> in_vprime(static_cast<std::size_t>(f_.var_count()) + 1, 0);
  in_vprime[static_cast<std::size_t>(u)] = 1;

  auto clause_satisfied = [&](const clause& c) {
    for (const auto& l : c.lits)
      if (sigma.assigned(l.var) && l.satisfied_by(sigma.value(l.var))) return true;
    return false;
  };

  for (;;) {
    const clause* chosen = nullptr;
    for (const auto& c : f_.clauses()) {
      bool touches = false, escapes = false;
      for (const auto& l : c.lits) {
        if (in_vprime[static_cast<std::size_t>(l.var)])
          touches = true;
        else
          escapes = true;
      }
      if (touches && escapes && !clause_satisfied(c)) {
        chosen = &c;
        break;  // clauses are in id order
      }
    }
    if (!chosen) break;

    std::vector<std::pair<var_id, tri>> lb_vals;
    bool any_satisfies = false;
    for (const auto& l : chosen->lits) {
      if (l.var == u) continue;
      int idx = sched_.index_of(l.var);
      if (idx == 0) continue;  // unmarked
      tri lv = lb_sample(pred_time(idx, t, m));
      lb_vals.emplace_back(l.var, lv);
      if (lv != tri::bot && l.satisfied_by(static_cast<int>(lv))) any_satisfies = true;
    }

    if (!any_satisfies) {
      for (const auto& [w, lv] : lb_vals) {
        (void)lv;
        int idx = sched_.index_of(w);
        int val = run(pred_time(idx, t, m), depth + 1);
        sigma.set_bit(w, val);
      }
      for (const auto& l : chosen->lits) in_vprime[static_cast<std::size_t>(l.var)] = 1;
    } else {
      for (const auto& [w, lv] : lb_vals) {
        // a 0/1 entry is never demoted back to bot
        if (lv == tri::bot && sigma.assigned(w)) continue;
        sigma.set(w, lv);
      }
    }
  }

  component psi = component_of(f_, sigma, u);
  stats_.psi_clauses.push_back(static_cast<int>(psi.clauses.size()));
  stats_.psi_vars.push_back(static_cast<int>(psi.vars.size()));
  padding_result pr = padding_prob(psi, u, sigma, par_.theta, par_.component_enum_cap);
  int c = u01(seed_, stream_key::padding_draw(t)) < pr.p1 ? 1 : 0;
  state_.record_memo(t, c);
  return c;
}

int margin_sample(const formula& f, const seed& s, const scan_schedule& sched,
                  const margin_params& par, var_id u, cttp_stats* stats_out) {
  int idx = sched.index_of(u);
  if (idx == 0) fail(errc::sampler_failure, "margin_sample on an unmarked variable");
  glauber_ctx ctx(f, s, sched, par);
  int out = ctx.run(pred_time(idx, 0, sched.m()));
  if (stats_out) {
    *stats_out = ctx.stats();
    stats_out->final_r = ctx.state().r_size();
  }
  return out;
}

std::vector<int> forward_scan(const formula& f, const scan_schedule& sched, const seed& s,
                              const margin_params& par) {
  const int m = sched.m();
  std::vector<int> x(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i)
    x[static_cast<std::size_t>(i - 1)] = bit(s, stream_key::init_y(sched.at(i)));
  if (m == 0) return x;
  if (!(par.theta > 0.0 && par.theta < 0.5))
    fail(errc::invalid_theta, "theta must lie in (0, 1/2)");

  for (long long t = -par.horizon + 1; t <= 0; ++t) {
    int i = i_of(t, m);
    var_id u = sched.at(i);
    double draw = u01(s, stream_key::lb_sample(t));
    if (draw < 2 * par.theta) {
      x[static_cast<std::size_t>(i - 1)] = draw < par.theta ? 0 : 1;
      continue;
    }
    partial_assignment rest(f.var_count());
    for (int j = 1; j <= m; ++j)
      if (j != i) rest.set_bit(sched.at(j), x[static_cast<std::size_t>(j - 1)]);
    component psi = component_of(f, rest, u);
    padding_result pr = padding_prob(psi, u, rest, par.theta, par.component_enum_cap);
    x[static_cast<std::size_t>(i - 1)] = u01(s, stream_key::padding_draw(t)) < pr.p1 ? 1 : 0;
  }
  return x;
}

}  // namespace lasat
