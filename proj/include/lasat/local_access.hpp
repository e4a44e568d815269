#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lasat/component.hpp"
#include "lasat/conditions.hpp"
#include "lasat/formula.hpp"
#include "lasat/glauber.hpp"
#include "lasat/marking.hpp"
#include "lasat/oracle.hpp"
#include "lasat/tape.hpp"

namespace lasat {

struct sampler_caps {
  int conn_clause_cap = 0;       // 0 = auto
  int component_enum_cap = 22;   // free vars per exact enumeration
  int oracle_cap = 26;           // vars for oracle-side enumeration (theta derivation)
  bool whole_formula_fallback = false;
};

struct sampler_config {
  marking_params marking;
  std::optional<double> theta_override;
  long long horizon = 0;  // 0 = auto
  long long r_cap = 0;    // 0 = auto
  sampler_caps caps;
};

struct sample_result {
  var_id var = 0;
  int value = 0;
  bool marked = false;
  // trace
  long long final_r = 0;
  long long cap_hits = 0;
  long long max_depth = 0;
  int component_clauses = 0;
  int component_vars = 0;
};

struct batch_result {
  std::vector<sample_result> values;  // sorted by variable
  bool failed = false;
  std::string error;
  var_id failed_var = 0;
};

// Immutable sampling session: the marking, scan schedule and theta are fixed
// by (formula, seed, config) at construction, after which queries are pure
// and safe to run concurrently.
class sampler_context {
 public:
  sampler_context(formula f, seed s, sampler_config cfg = {});

  const formula& instance() const { return f_; }
  const seed& session_seed() const { return seed_; }
  const sampler_config& config() const { return cfg_; }

  bool marking_failed() const { return marking_.failed; }
  const marking_result& marking() const { return marking_; }
  const scan_schedule& schedule() const { return sched_; }
  double theta() const;                  // throws when no valid theta exists
  const margin_params& margin() const;   // throws when no valid theta exists
  std::optional<double> derived_lb() const { return derived_b_; }

  sample_result sample(var_id v) const;
  // queries are pure, so the batch may fan out across workers; results come
  // back in ascending variable order either way
  batch_result sample_many(std::vector<var_id> vars, int jobs = 1) const;

 private:
  formula f_;
  seed seed_;
  sampler_config cfg_;
  marking_result marking_;
  scan_schedule sched_;
  margin_params margin_;
  bool theta_valid_ = false;
  std::string theta_error_;
  std::optional<double> derived_b_;
};

}  // namespace lasat
