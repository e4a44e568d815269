#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lasat/formula.hpp"
#include "lasat/tape.hpp"

namespace lasat {

// Ordering u_1 < ... < u_m of the marked variables (ascending id). The scan
// at time t updates u_{i(t)}.
struct scan_schedule {
  std::vector<var_id> order;

  static scan_schedule from_marked(std::vector<var_id> marked);

  int m() const { return static_cast<int>(order.size()); }
  var_id at(int index1) const { return order[static_cast<std::size_t>(index1 - 1)]; }
  int index_of(var_id u) const;  // 1-based; 0 when unmarked
  bool contains(var_id u) const { return index_of(u) != 0; }
};

struct margin_params {
  double theta = 0;        // in (0, 1/2)
  long long horizon = 0;   // T
  long long r_cap = 0;     // return-1 cap on |R|
  int component_enum_cap = 22;  // free variables per exact component enumeration
};

long long default_horizon(int m, int n);        // 64 m ceil(ln(n+1))
long long default_r_cap(int k, int d, int n);   // ceil(80 d k^4 ln n)

// i(t) = (t mod m) + 1 with floored modulo, so negative times land in [1, m].
int i_of(long long t, int m);

// max{s <= t : i(s) = u_index}; within (t-m, t], and < t unless u_index = i(t).
long long pred_time(int u_index, long long t, int m);

struct cttp_stats {
  long long lb_draws = 0;       // fresh lower-bound draws recorded into R
  long long glauber_calls = 0;
  long long cap_hits = 0;
  long long final_r = 0;
  long long max_depth = 0;
  std::vector<int> psi_clauses;  // component sizes at padding draws
  std::vector<int> psi_vars;
};

// Per-query state of the backward simulation: write-once memo of resolved
// updates (M) and of lower-bound outcomes (R).
class cttp_state {
 public:
  bool has_memo(long long t) const { return memo_.count(t) != 0; }
  int memo(long long t) const { return memo_.at(t); }
  void record_memo(long long t, int value);

  bool has_lb(long long t) const { return lb_.count(t) != 0; }
  tri lb(long long t) const { return lb_.at(t); }
  void record_lb(long long t, tri value);

  long long r_size() const { return static_cast<long long>(lb_.size()); }

 private:
  std::map<long long, int> memo_;
  std::map<long long, tri> lb_;
};

struct padding_result {
  double q1;  // exact conditional marginal of u = 1 on the component
  double p1;  // (q1 - theta) / (1 - 2 theta)
};

// Exact padding probability by enumeration over the discovered component.
// sigma is the partial assignment the component was reduced under; its
// bot entries impose no constraint.
padding_result padding_prob(const component& psi, var_id u, const partial_assignment& sigma,
                            double theta, int enum_cap = 22);

// One top-level backward query. Owns its cttp_state; all randomness is
// tape-keyed so overlapping executions of independent queries agree.
class glauber_ctx {
 public:
  glauber_ctx(const formula& f, const seed& s, const scan_schedule& sched,
              const margin_params& par);

  int y_init(var_id u) const { return bit(seed_, stream_key::init_y(u)); }

  tri lb_sample(long long t);
  int run(long long t, long long depth = 0);  // Glauber(t)

  const cttp_stats& stats() const { return stats_; }
  cttp_state& state() { return state_; }

 private:
  const formula& f_;
  seed seed_;
  const scan_schedule& sched_;
  margin_params par_;
  cttp_state state_;
  cttp_stats stats_;
};

int margin_sample(const formula& f, const seed& s, const scan_schedule& sched,
                  const margin_params& par, var_id u, cttp_stats* stats_out = nullptr);

// Systematic-scan chain run forward from X_{-T} = Y, consuming exactly the
// tape draws LbSample(t) and PaddingDraw(t) that the backward simulation
// consumes, so the two couple exactly. Oracle-scale instances only.
// Returns X_0 aligned with the schedule order.
std::vector<int> forward_scan(const formula& f, const scan_schedule& sched, const seed& s,
                              const margin_params& par);

}  // namespace lasat
