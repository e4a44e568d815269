#pragma once

#include <stdexcept>
#include <string>

namespace lasat {

enum class errc {
  malformed_dimacs,
  variable_out_of_range,
  repeated_variable,
  empty_clause,
  infeasible_partial_assignment,
  variable_assigned,
  tree_cap_exceeded,
  component_cap_exceeded,
  all_repetitions_failed,
  no_valid_coloring,
  marking_broken,
  invalid_theta,
  component_too_large,
  no_satisfying_assignment,
  unsatisfiable,
  too_many_variables,
  empty_sample_set,
  domain_error,
  sampler_failure,
  bad_config,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace lasat
