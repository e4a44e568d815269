#include "lasat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

struct clause_masks {
  assignment_mask pos = 0;
  assignment_mask neg = 0;
};

std::vector<clause_masks> build_masks(const formula& f) {
  const int n = f.var_count();
  std::vector<clause_masks> masks;
  masks.reserve(f.clauses().size());
  for (const auto& c : f.clauses()) {
    clause_masks m;
    for (const auto& l : c.lits) {
      assignment_mask bit = assignment_mask(1) << (n - l.var);
      if (l.positive)
        m.pos |= bit;
      else
        m.neg |= bit;
    }
    masks.push_back(m);
  }
  return masks;
}

inline bool satisfies(assignment_mask x, const std::vector<clause_masks>& masks) {
  for (const auto& m : masks)
    if ((x & m.pos) == 0 && (~x & m.neg) == 0) return false;
  return true;
}

}  // namespace

exact_distribution exact_distribution::from_counts(
    const std::map<std::vector<std::uint8_t>, double>& counts) {
  exact_distribution d;
  double total = 0;
  for (const auto& [key, cnt] : counts) total += cnt;
  if (total <= 0) fail(errc::empty_sample_set, "no mass in distribution");
  for (const auto& [key, cnt] : counts) {
    d.support.push_back(key);
    d.probs.push_back(cnt / total);
  }
  return d;
}

std::vector<assignment_mask> enumerate_sat(const formula& f, int cap_vars) {
  const int n = f.var_count();
  if (n > cap_vars || n > 31)
    fail(errc::too_many_variables,
         std::to_string(n) + " variables exceed enumeration cap " + std::to_string(cap_vars));
  auto masks = build_masks(f);
  std::vector<assignment_mask> out;
  const assignment_mask end = assignment_mask(1) << n;
  for (assignment_mask x = 0; x != end; ++x)
    if (satisfies(x, masks)) out.push_back(x);
  return out;
}

exact_distribution exact_marginal(const formula& f, std::vector<var_id> s,
                                  const partial_assignment& sigma, int cap_vars) {
  const int n = f.var_count();
  for (var_id v : s) {
    if (v < 1 || v > n) fail(errc::variable_out_of_range, "marginal variable out of range");
    if (sigma.assigned(v))
      fail(errc::variable_assigned,
           "S intersects the assigned part of the conditioning (variable " + std::to_string(v) + ")");
  }
  std::sort(s.begin(), s.end());

  assignment_mask cond_mask = 0, cond_vals = 0;
  for (var_id v = 1; v <= n; ++v) {
    if (sigma.var_count() >= v && sigma.assigned(v)) {
      cond_mask |= assignment_mask(1) << (n - v);
      if (sigma.value(v) == 1) cond_vals |= assignment_mask(1) << (n - v);
    }
  }

  auto sat = enumerate_sat(f, cap_vars);
  std::map<std::vector<std::uint8_t>, double> counts;
  for (assignment_mask x : sat) {
    if ((x & cond_mask) != cond_vals) continue;
    std::vector<std::uint8_t> key;
    key.reserve(s.size());
    for (var_id v : s) key.push_back(static_cast<std::uint8_t>(assignment_value(x, v, n)));
    counts[key] += 1.0;
  }
  if (counts.empty())
    fail(errc::no_satisfying_assignment, "conditioning event has no satisfying assignment");
  return exact_distribution::from_counts(counts);
}

marginal_lb_result min_conditional_lb(const formula& f, const std::vector<var_id>& marking,
                                      bool exhaustive, long long sample_cases,
                                      std::uint64_t rng_seed, int cap_vars) {
  const int n = f.var_count();
  const int m = static_cast<int>(marking.size());
  if (m == 0) return {0.5, 0, false, 0};
  if (m > 26) fail(errc::too_many_variables, "marking too large to enumerate conditionings");

  std::vector<var_id> marked = marking;
  std::sort(marked.begin(), marked.end());

  auto sat = enumerate_sat(f, cap_vars);
  if (sat.empty()) fail(errc::no_satisfying_assignment, "formula is unsatisfiable");

  // Restriction counts over the marking.
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  counts.reserve(sat.size() * 2);
  for (assignment_mask x : sat) {
    std::uint32_t key = 0;
    for (int i = 0; i < m; ++i)
      key |= std::uint32_t(assignment_value(x, marked[static_cast<std::size_t>(i)], n)) << i;
    ++counts[key];
  }

  marginal_lb_result res;
  res.b = 0.5;
  res.all_full_conditionings_feasible =
      m <= 30 && counts.size() == (std::size_t(1) << m);

  auto inspect = [&](int i, std::uint32_t key) {
    // key has bit i cleared; partner differs in marked[i]
    std::uint32_t partner = key | (std::uint32_t(1) << i);
    auto it0 = counts.find(key);
    auto it1 = counts.find(partner);
    double c0 = it0 == counts.end() ? 0.0 : it0->second;
    double c1 = it1 == counts.end() ? 0.0 : it1->second;
    if (c0 + c1 == 0) return;  // infeasible conditioning, outside the definition
    ++res.cases;
    double mn = std::min(c0, c1) / (c0 + c1);
    if (mn < res.b) {
      res.b = mn;
      res.argmin_var = marked[static_cast<std::size_t>(i)];
    }
    if (mn == 0.0) res.zero_marginal = true;
  };

  if (exhaustive) {
    for (int i = 0; i < m; ++i) {
      for (const auto& [key, cnt] : counts) {
        (void)cnt;
        inspect(i, key & ~(std::uint32_t(1) << i));
      }
    }
  } else {
    std::mt19937_64 rng(rng_seed);
    std::vector<std::uint32_t> keys;
    keys.reserve(counts.size());
    for (const auto& [key, cnt] : counts) {
      (void)cnt;
      keys.push_back(key);
    }
    for (long long it = 0; it < sample_cases; ++it) {
      int i = static_cast<int>(rng() % std::uint64_t(m));
      std::uint32_t key = keys[static_cast<std::size_t>(rng() % keys.size())];
      inspect(i, key & ~(std::uint32_t(1) << i));
    }
  }
  return res;
}

double tv_distance(const exact_distribution& p, const exact_distribution& q) {
  std::map<std::vector<std::uint8_t>, double> diff;
  for (std::size_t i = 0; i < p.support.size(); ++i) diff[p.support[i]] += p.probs[i];
  for (std::size_t i = 0; i < q.support.size(); ++i) diff[q.support[i]] -= q.probs[i];
  double total = 0;
  for (const auto& [key, d] : diff) {
    (void)key;
    total += std::abs(d);
  }
  return total / 2;
}

exact_distribution empirical_distribution(const std::vector<std::vector<std::uint8_t>>& samples) {
  if (samples.empty()) fail(errc::empty_sample_set, "no samples");
  std::map<std::vector<std::uint8_t>, double> counts;
  for (const auto& s : samples) counts[s] += 1.0;
  return exact_distribution::from_counts(counts);
}

}  // namespace lasat
