#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lasat/conditions.hpp"
#include "lasat/formula.hpp"
#include "lasat/tape.hpp"

namespace lasat {

struct query_tree {
  var_id root;
  std::vector<var_id> nodes;                     // root first, then BFS order
  std::vector<std::pair<var_id, var_id>> edges;  // (child, parent)
};

struct marking_decision {
  var_id var = 0;
  bool marked = false;
  int phase = 1;        // phase that fixed the final color
  bool troubled1 = false;
  bool troubled2 = false;
  int phase2_rep = -1;  // chosen repetition when phase >= 2
};

enum class p1s : std::uint8_t { colored0 = 0, colored1 = 1, troubled = 2 };

// Shared lazy state for marking queries against one (formula, seed, params).
// Queries are pure functions of those three inputs; the context only caches.
// Not thread-safe; create one per thread (construction is cheap).
class marking_ctx {
 public:
  marking_ctx(const formula& f, const seed& s, const marking_params& p);

  // test hook: inject the vertex order and phase-1 colors directly
  marking_ctx(const formula& f, const marking_params& p, std::vector<double> order,
              std::vector<int> phase1_bits);

  const formula& instance() const { return *f_; }
  const marking_params& params() const { return par_; }
  double order_key(var_id v) const { return a_[static_cast<std::size_t>(v)]; }

  query_tree build_query_tree(var_id v) const;

  p1s phase1(var_id v);
  std::vector<var_id> phase1_component(var_id v);  // v must be troubled-1

  struct phase2_result {
    int rep = -1;
    std::vector<var_id> comp;                 // phase-1 component, sorted
    std::map<var_id, int> colors;             // phase-2 colors
    std::vector<var_id> troubled2;            // sorted
    std::vector<int> surviving_edges;         // clause ids not deleted after phases 1-2
  };
  const phase2_result& phase2(var_id v);  // keyed by v's phase-1 component

  // First valid coloring (lexicographic over sorted vars) of the troubled-2
  // component containing v; constraint edges keep >= ceil(alpha w) of each
  // color counting already-colored vertices.
  std::map<var_id, int> phase3(const phase2_result& ph2, var_id v);

  bool is_marked(var_id v);
  marking_decision decide(var_id v);

  struct edge_final {
    bool deleted = false;
    bool dangerous = false;
    int cnt[2] = {0, 0};
    std::vector<var_id> troubled;  // troubled-1 variables of this clause
  };
  const edge_final& edge_after_phase1(int cid);

 private:
  struct edge_sim;
  void run_phase1_tree(var_id v);
  bool order_less(var_id u, var_id w) const {
    return a_[u] != a_[w] ? a_[u] < a_[w] : u < w;
  }
  int tree_cap() const;
  int phase2_reps() const;
  int phase1_component_cap() const;
  int phase3_component_cap() const;
  std::optional<phase2_result> try_phase2_rep(const std::vector<var_id>& comp,
                                              const std::vector<int>& edges, int rep);

  const formula* f_;
  marking_params par_;
  seed seed_{};
  std::vector<double> a_;      // vertex order keys, index 1..n
  std::vector<int> bit1_;      // phase-1 colors
  std::vector<std::int8_t> st1_;  // -1 unknown, else p1s
  std::map<int, edge_final> edge_final_;
  std::map<var_id, phase2_result> phase2_;         // keyed by component min var
  std::map<var_id, std::map<var_id, int>> phase3_;  // keyed by troubled-2 component min var
};

bool is_marked(const formula& f, const seed& s, const marking_params& p, var_id v);

struct marking_result {
  std::vector<std::int8_t> marked;  // index 1..n; -1 where the query failed
  std::vector<marking_decision> decisions;
  bool failed = false;
  std::string failure;

  std::vector<var_id> marked_vars() const;
};

marking_result compute_marking(const formula& f, const seed& s, const marking_params& p);

struct marking_validation {
  struct clause_counts {
    int id;
    int width;
    int marked;
    int unmarked;
    int need;
  };
  bool valid = true;
  std::vector<clause_counts> per_clause;
};

marking_validation validate_marking(const formula& f, const std::vector<var_id>& marking,
                                    double alpha);

}  // namespace lasat
