#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lasat/formula.hpp"

namespace lasat {

// Assignments over n <= 32 variables packed with variable 1 at the most
// significant used bit, so numeric order equals lexicographic order over
// (v1, ..., vn).
using assignment_mask = std::uint32_t;

inline int assignment_value(assignment_mask x, var_id v, int n) {
  return static_cast<int>((x >> (n - v)) & 1u);
}

struct exact_distribution {
  // entries sorted by support tuple; probabilities parallel to support
  std::vector<std::vector<std::uint8_t>> support;
  std::vector<double> probs;

  static exact_distribution from_counts(const std::map<std::vector<std::uint8_t>, double>& counts);
};

// All satisfying assignments in lexicographic order.
std::vector<assignment_mask> enumerate_sat(const formula& f, int cap_vars = 26);

// Marginal of the uniform distribution over satisfying assignments on S,
// conditioned on sigma (bot entries impose no constraint).
exact_distribution exact_marginal(const formula& f, std::vector<var_id> s,
                                  const partial_assignment& sigma, int cap_vars = 26);

struct marginal_lb_result {
  double b = 0.5;             // min over v in M and feasible conditionings of min marginal
  var_id argmin_var = 0;
  bool zero_marginal = false;  // some feasible conditioning pins a marked variable
  bool all_full_conditionings_feasible = false;  // every tau in {0,1}^M is feasible
  long long cases = 0;         // (v, conditioning) pairs inspected
};

// Minimization runs over full assignments of M \ {v}; partial conditionings
// are convex combinations of those, so the minimum over full assignments is
// the global minimum. Sampled mode inspects at most sample_cases pairs.
marginal_lb_result min_conditional_lb(const formula& f, const std::vector<var_id>& marking,
                                      bool exhaustive = true, long long sample_cases = 20000,
                                      std::uint64_t rng_seed = 1, int cap_vars = 26);

double tv_distance(const exact_distribution& p, const exact_distribution& q);

exact_distribution empirical_distribution(const std::vector<std::vector<std::uint8_t>>& samples);

}  // namespace lasat
