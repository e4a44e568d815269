#pragma once

#include <vector>

#include "lasat/formula.hpp"
#include "lasat/glauber.hpp"
#include "lasat/tape.hpp"

namespace lasat {

struct conn_result {
  component comp;               // connected component of v in the reduced formula
  partial_assignment sigma;     // marked assignments drawn during exploration
  std::vector<int> visited;     // every clause id that entered the stack
  cttp_stats margin_stats;      // aggregated over the margin_sample calls
};

struct conn_params {
  int clause_cap = 0;  // explored-clause cap; 0 = auto
};

long long default_conn_cap(int k, int d, int n);

// Depth-first exploration that samples marked variables on demand and stops
// at clauses satisfied by the partial assignment. v must be unmarked.
conn_result conn(const formula& f, const seed& s, const scan_schedule& sched,
                 const margin_params& par, var_id v, const conn_params& cp = {});

// Uniform satisfying assignment of a discovered component, keyed by the
// component's smallest variable so every query landing in the same component
// sees the same extension. Isolated variables get tape bits.
std::vector<std::pair<var_id, int>> uniform_sample_component(const seed& s, const component& comp,
                                                             int enum_cap = 22);

}  // namespace lasat
