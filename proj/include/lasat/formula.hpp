#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lasat {

using var_id = int;  // 1-based

// Three-valued assignment entry: bot marks a variable that was accessed by
// the algorithm but left unassigned.
enum class tri : std::uint8_t { zero = 0, one = 1, bot = 2 };

struct literal {
  var_id var;
  bool positive;

  bool satisfied_by(int value) const { return positive ? value == 1 : value == 0; }
  int encode() const { return positive ? var : -var; }
  bool operator==(const literal&) const = default;
};

struct clause {
  int id = 0;  // position in the DIMACS input; fixes the "lowest index" order
  std::vector<literal> lits;

  int width() const { return static_cast<int>(lits.size()); }
  bool operator==(const clause&) const = default;
};

class formula {
 public:
  formula() = default;

  static formula parse_dimacs(const std::string& text);
  static formula from_clauses(int n, std::vector<std::vector<int>> encoded);

  std::string to_dimacs() const;

  int var_count() const { return n_; }
  const std::vector<clause>& clauses() const { return clauses_; }
  const std::vector<int>& clauses_of(var_id v) const;

  int k_max() const { return k_max_; }
  int max_degree() const { return d_; }    // d
  int max_overlap() const { return delta_; }  // Delta, counts the clause itself

  bool operator==(const formula&) const = default;

 private:
  void build_index();

  int n_ = 0;
  std::vector<clause> clauses_;
  std::vector<std::vector<int>> occ_;  // var -> clause ids
  int k_max_ = 0;
  int d_ = 0;
  int delta_ = 0;
};

struct degree_profile_t {
  int k_max;
  int d;
  int delta;
};

degree_profile_t degree_profile(const formula& f);

class partial_assignment {
 public:
  partial_assignment() = default;
  explicit partial_assignment(int n) : values_(static_cast<std::size_t>(n) + 1, kUnset) {}

  int var_count() const { return static_cast<int>(values_.size()) - 1; }

  void set(var_id v, tri value) { values_.at(static_cast<std::size_t>(v)) = static_cast<std::uint8_t>(value); }
  void set_bit(var_id v, int b) { set(v, b ? tri::one : tri::zero); }
  void unset(var_id v) { values_.at(static_cast<std::size_t>(v)) = kUnset; }

  bool accessed(var_id v) const { return values_[static_cast<std::size_t>(v)] != kUnset; }
  bool assigned(var_id v) const { return values_[static_cast<std::size_t>(v)] <= 1; }
  int value(var_id v) const { return values_[static_cast<std::size_t>(v)]; }  // requires assigned()

  std::optional<tri> get(var_id v) const {
    auto raw = values_[static_cast<std::size_t>(v)];
    if (raw == kUnset) return std::nullopt;
    return static_cast<tri>(raw);
  }

  std::vector<var_id> assigned_vars() const;
  std::vector<var_id> accessed_vars() const;

 private:
  static constexpr std::uint8_t kUnset = 255;
  std::vector<std::uint8_t> values_;
};

enum class clause_status { satisfied, open, falsified };

struct clause_state_t {
  clause_status status;
  std::vector<literal> open_lits;  // unassigned literals only (bot-marked variables remain)
};

clause_state_t clause_state(const clause& c, const partial_assignment& sigma);

struct reduced_clause {
  int orig_id;
  std::vector<literal> lits;

  bool operator==(const reduced_clause&) const = default;
};

struct reduced_formula {
  std::vector<var_id> free_vars;  // sorted
  std::vector<reduced_clause> clauses;
};

// Strict mode rejects assignments that falsify a clause; oracle callers may
// relax and get the falsified clauses dropped from the result.
reduced_formula reduce(const formula& f, const partial_assignment& sigma, bool strict = true);

struct component {
  std::vector<var_id> vars;  // sorted
  std::vector<reduced_clause> clauses;

  var_id canonical_rep() const { return vars.front(); }
  bool operator==(const component&) const = default;
};

component component_of(const formula& f, const partial_assignment& sigma, var_id v);

}  // namespace lasat
