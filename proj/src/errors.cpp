#include "lasat/errors.hpp"

namespace lasat {

const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_dimacs: return "MalformedDimacs";
    case errc::variable_out_of_range: return "VariableOutOfRange";
    case errc::repeated_variable: return "RepeatedVariable";
    case errc::empty_clause: return "EmptyClause";
    case errc::infeasible_partial_assignment: return "InfeasiblePartialAssignment";
    case errc::variable_assigned: return "VariableAssigned";
    case errc::tree_cap_exceeded: return "TreeCapExceeded";
    case errc::component_cap_exceeded: return "ComponentCapExceeded";
    case errc::all_repetitions_failed: return "AllRepetitionsFailed";
    case errc::no_valid_coloring: return "NoValidColoring";
    case errc::marking_broken: return "MarkingBroken";
    case errc::invalid_theta: return "InvalidTheta";
    case errc::component_too_large: return "ComponentTooLarge";
    case errc::no_satisfying_assignment: return "NoSatisfyingAssignment";
    case errc::unsatisfiable: return "Unsatisfiable";
    case errc::too_many_variables: return "TooManyVariables";
    case errc::empty_sample_set: return "EmptySampleSet";
    case errc::domain_error: return "DomainError";
    case errc::sampler_failure: return "SamplerFailure";
    case errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

}  // namespace lasat
