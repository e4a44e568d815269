#include <doctest.h>

#include <cmath>

#include "lasat/conditions.hpp"
#include "lasat/errors.hpp"

using namespace lasat;

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  double direct = -0.11 * std::log2(0.11) - 0.89 * std::log2(0.89);
  CHECK(binary_entropy(0.11) == doctest::Approx(direct).epsilon(1e-15));
  CHECK_THROWS_AS(binary_entropy(-0.1), error);
  CHECK_THROWS_AS(binary_entropy(1.1), error);
}

TEST_CASE("marking conditions fail at desk scale") {
  marking_params p;
  auto rep = check_conditions_marking(3, std::log2(2.0), p);
  CHECK_FALSE(rep.all_pass);
}

TEST_CASE("ordering precondition violations are reported as failures") {
  marking_params p;
  p.beta1 = p.beta2 = 0.9;
  auto rep = check_conditions_marking(100, 1.0, p);
  CHECK_FALSE(rep.all_pass);
  CHECK_FALSE(rep.checks[0].pass);
}

TEST_CASE("monotonicity of the phase-2 exponent holds at the default parameters") {
  marking_params p;
  auto rep = check_conditions_marking(1e4, 25.0, p, 10000);
  bool monotone = false;
  for (const auto& c : rep.checks)
    if (c.name.find("decreasing") != std::string::npos) monotone = c.pass;
  CHECK(monotone);
}

TEST_CASE("counting inequalities improve with k") {
  marking_params p;
  auto small = check_conditions_marking(1e4, 25.0, p);
  auto large = check_conditions_marking(1e6, 2500.0, p);
  auto slack_of = [](const conditions_report& r, const char* frag) {
    for (const auto& c : r.checks)
      if (c.name.find(frag) != std::string::npos) return c.slack;
    return -1e300;
  };
  CHECK(slack_of(large, "beta1 - h(1-beta1)") > slack_of(small, "beta1 - h(1-beta1)"));
  CHECK(slack_of(large, "beta1 - h(1-beta1)") > 0);  // passes once k is large enough
}

TEST_CASE("margin conditions at the boundary d = 2^(alpha k / 4)") {
  auto rep = check_conditions_margin(300, 1.0, 1.0 / 75);  // alpha k / 4 = 1 exactly
  bool boundary_pass = false;
  for (const auto& c : rep.checks)
    if (c.name.find("alpha k / 4") != std::string::npos) boundary_pass = c.pass;
  CHECK(boundary_pass);
}

TEST_CASE("theta_default") {
  // blows up at small k
  theta_info tiny = theta_default(3, 2, 1.0 / 3);
  CHECK_FALSE(tiny.positive);

  // still far from 0.4 at k = 400, d = 2: 2edk / 2^(alpha k) ~ 108
  theta_info mid = theta_default(400, 2, 1.0 / 75);
  CHECK_FALSE(mid.meets_min);

  // meets the bound once 2^(alpha k) dominates 2edk
  theta_info big = theta_default(1600, 2, 1.0 / 75);
  CHECK(big.positive);
  CHECK(big.meets_min);
  CHECK(big.value < 0.5);
  double direct = 1 - 0.5 * std::exp(2 * std::exp(1.0) * 2 * 1600 / std::exp2(1600.0 / 75));
  CHECK(big.value == doctest::Approx(direct).epsilon(1e-12));

  // asymptotically theta -> 1/2 from below
  theta_info huge = theta_default(1e5, 2, 1.0 / 75);
  CHECK(huge.value > 0.499);
  CHECK(huge.value <= 0.5);
}
