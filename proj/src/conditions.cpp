#include "lasat/conditions.hpp"

#include <cmath>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

constexpr double kLog2E = 1.4426950408889634;

double log2_safe(double x) { return std::log2(x); }

// Exponent of the phase-2 dangerous-edge bound as a function of the fraction
// delta of vertices colored before the phase.
double phase2_exponent(double delta, double beta2) {
  return (beta2 - delta) - binary_entropy((beta2 - delta) / (1 - delta)) * (1 - delta);
}

}  // namespace

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) fail(errc::domain_error, "binary_entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

conditions_report check_conditions_marking(double k, double log2_d, const marking_params& p,
                                           int monotonicity_grid) {
  conditions_report rep;
  const double a = p.alpha, b1 = p.beta1, b2 = p.beta2;

  {
    condition_check c;
    c.name = "ordering 1/2 < beta1 < beta2 < 1 - alpha";
    c.pass = 0.5 < b1 && b1 < b2 && b2 < 1 - a && a > 0 && a < 0.5;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "4 alpha < 2(1 - beta2) < 1 - beta1";
    c.lhs = 4 * a;
    c.rhs = 2 * (1 - b2);
    c.pass = (4 * a < 2 * (1 - b2)) && (2 * (1 - b2) < 1 - b1);
    c.slack = std::min(2 * (1 - b2) - 4 * a, (1 - b1) - 2 * (1 - b2));
    rep.add(c);
  }
  if (!rep.all_pass) {
    // entropy arguments below need the ordering to hold
    condition_check c;
    c.name = "counting and local-lemma bounds";
    c.pass = false;
    c.note = "skipped: ordering precondition violated";
    rep.add(c);
    return rep;
  }

  const double lhs_count = 4 + 4 * log2_safe(k) + 5 * log2_d;  // log2(16 k^4 d^5)
  {
    condition_check c;
    c.name = "16 k^4 d^5 <= 2^((beta1 - h(1-beta1)) k)";
    c.lhs = lhs_count;
    c.rhs = (b1 - binary_entropy(1 - b1)) * k;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "16 k^4 d^5 <= 2^((beta2-beta1) k - h((beta2-beta1)/(1-beta1)) (1-beta1) k)";
    c.lhs = lhs_count;
    c.rhs = (b2 - b1) * k - binary_entropy((b2 - b1) / (1 - b1)) * (1 - b1) * k;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "delta -> (beta2-delta) - h((beta2-delta)/(1-delta)) (1-delta) decreasing on [0, beta1]";
    c.pass = true;
    const double h = b1 / (2.0 * monotonicity_grid);
    double worst = -1e300;
    for (int i = 0; i < monotonicity_grid; ++i) {
      double delta = b1 * (i + 0.5) / monotonicity_grid;
      double deriv = (phase2_exponent(delta + h, b2) - phase2_exponent(delta - h, b2)) / (2 * h);
      worst = std::max(worst, deriv);
      if (deriv > 1e-9) c.pass = false;
    }
    c.lhs = worst;  // max sampled derivative
    c.rhs = 0;
    c.slack = -worst;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "2e(kd+1) < 2^((1 - h(alpha/(1-beta2))) (1-beta2) k)";
    double kd_log2 = log2_safe(k) + log2_d;
    // log2(kd + 1): kd dominates unless everything is tiny
    double lhs = log2_safe(2 * std::exp(1.0)) +
                 (kd_log2 > 50 ? kd_log2 : log2_safe(std::exp2(kd_log2) + 1));
    c.lhs = lhs;
    c.rhs = (1 - binary_entropy(a / (1 - b2))) * (1 - b2) * k;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs < c.rhs;
    rep.add(c);
  }
  return rep;
}

conditions_report check_conditions_margin(double k, double log2_d, double alpha) {
  conditions_report rep;
  const double ak = alpha * k;

  {
    condition_check c;
    c.name = "4 k (dk)^5 2^(-alpha k) <= 1/(150 e^3)";
    c.lhs = 2 + log2_safe(k) + 5 * (log2_d + log2_safe(k)) - ak;
    c.rhs = -log2_safe(150.0) - 3 * kLog2E;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "theta = 1 - exp(2edk/2^(alpha k))/2 >= 0.4";
    theta_info ti = theta_default(k, std::exp2(log2_d), alpha);
    c.lhs = ti.value;  // natural scale
    c.rhs = 0.4;
    c.slack = ti.value - 0.4;
    c.pass = ti.meets_min;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "36 e d^3 k^4 0.6^(alpha k) <= 1/2";
    c.lhs = log2_safe(36.0) + kLog2E + 3 * log2_d + 4 * log2_safe(k) + ak * std::log2(0.6);
    c.rhs = -1;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "2^(-1/(48 d k^4)) exp(2 d^2 / (alpha 2^(alpha k))) <= 0.9";
    // log2 of the first factor; second factor's exponent evaluated in log space
    double t1 = -1.0 / (48.0 * std::exp2(log2_d) * k * k * k * k);
    double x_log2 = 1 + 2 * log2_d - log2_safe(alpha) - ak;
    double lhs_log2;
    if (x_log2 > 11)
      lhs_log2 = 1e300;  // exp term blows up
    else
      lhs_log2 = t1 + std::exp2(x_log2) * kLog2E;
    c.lhs = lhs_log2;
    c.rhs = std::log2(0.9);
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  {
    condition_check c;
    c.name = "d <= 2^(alpha k / 4)";
    c.lhs = log2_d;
    c.rhs = ak / 4;
    c.slack = c.rhs - c.lhs;
    c.pass = c.lhs <= c.rhs;
    rep.add(c);
  }
  return rep;
}

theta_info theta_default(double k, double d, double alpha) {
  theta_info ti;
  double x_log2 = 1 + kLog2E + std::log2(d) + std::log2(k) - alpha * k;
  if (x_log2 > 11) {
    ti.value = -std::numeric_limits<double>::infinity();
    return ti;
  }
  ti.value = 1 - 0.5 * std::exp(std::exp2(x_log2));
  ti.positive = ti.value > 0;
  ti.meets_min = ti.value >= 0.4;
  return ti;
}

}  // namespace lasat
