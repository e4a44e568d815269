#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lasat/json_out.hpp"
#include "lasat/local_access.hpp"

namespace lasat {

// Deterministic random (k,d)-instances for the verification corpora.
formula gen_formula(int n, int n_clauses, int k, int d_max, std::uint64_t gen_seed);

formula example_formula();  // 5 variables, 3 width-3 clauses, d = 2

struct criterion_result {
  int id = 0;
  std::string name;
  bool pass = false;
  bool monitored = false;  // informational, no pass/fail
  std::string detail;
  json data;
};

struct verify_options {
  long long tv_samples = 200000;
  double tv_tolerance = 0.02;
  long long lb_samples = 1000000;
  double lb_tolerance = 0.005;
  int coupling_instances = 30;
  int coupling_seeds = 6;
  int consistency_instances = 10;
  int consistency_seeds = 20;
  int marking_instances = 50;
  int conn_instances = 30;
  std::uint64_t base_seed = 0x5eedULL;
};

criterion_result criterion_coupling(const verify_options& o);     // 1
criterion_result criterion_joint_tv(const verify_options& o);     // 2
criterion_result criterion_memoryless(const verify_options& o);   // 3
criterion_result criterion_marking(const verify_options& o);      // 4
criterion_result criterion_lb_law(const verify_options& o);       // 5
criterion_result criterion_padding(const verify_options& o);      // 6
criterion_result criterion_conn(const verify_options& o);         // 7
criterion_result criterion_conditions(const verify_options& o);   // 8
criterion_result criterion_monitored(const verify_options& o);    // 9

std::vector<criterion_result> run_all_criteria(const verify_options& o);

// File-scoped suites behind the CLI `verify` subcommand.
json verify_file_suite(const formula& f, const sampler_config& cfg, const std::string& suite,
                       const verify_options& o);

}  // namespace lasat
