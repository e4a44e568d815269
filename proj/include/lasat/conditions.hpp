#pragma once

#include <string>
#include <vector>

namespace lasat {

struct marking_params {
  double alpha = 1.0 / 75;
  double beta1 = 0.778;
  double beta2 = 0.96;
  double c = 1.0;               // failure exponent, reporting only
  int phase2_reps = 0;          // 0 = auto: max(8, ceil(log n / log log n))
  int component_cap_phase1 = 64;  // x log2(n+1) vertices
  int component_cap_phase3 = 16;  // x log2(log2(n+4)) vertices
  int tree_cap = 0;             // query-tree node cap; 0 = auto
  int phase3_search_cap = 20;   // max free variables per exhaustive coloring search
};

// h(x) = -x log2(x) - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

struct condition_check {
  std::string name;
  bool pass = false;
  double lhs = 0;   // log2-scale where the inequality is exponential
  double rhs = 0;
  double slack = 0;  // rhs - lhs (>= 0 iff pass for <=-style checks)
  std::string note;
};

struct conditions_report {
  std::vector<condition_check> checks;
  bool all_pass = true;

  void add(condition_check c) {
    all_pass = all_pass && c.pass;
    checks.push_back(std::move(c));
  }
};

// Marking feasibility condition set: parameter ordering, two counting
// inequalities, monotonicity of the phase-2 exponent (checked by
// derivative-sign sampling on a grid), and the phase-3 local-lemma bound.
conditions_report check_conditions_marking(double k, double log2_d, const marking_params& p,
                                           int monotonicity_grid = 10000);

// Sampler condition set: the uniform-sampler density bound, theta >= 0.4,
// the 2-tree union bound, the geometric cost ratio, and d <= 2^(alpha k/4).
conditions_report check_conditions_margin(double k, double log2_d, double alpha);

struct theta_info {
  double value = 0;      // 1 - exp(2 e d k / 2^(alpha k)) / 2
  bool positive = false;
  bool meets_min = false;  // value >= 0.4
};

theta_info theta_default(double k, double d, double alpha);

}  // namespace lasat
