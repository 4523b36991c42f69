#include "collatz/model.hpp"

#include <cmath>
#include <numeric>

#include "collatz/error.hpp"

namespace collatz::model {

namespace {

double ln_at_least_two(const Natural& n) {
  if (n < Natural(2)) throw DomainError("model predictions need n >= 2");
  return n.ln();
}

}  // namespace

double expected_slope() { return 0.5 * std::log(3.0 / 4.0); }

double step_coefficient() { return 2.0 / std::log(4.0 / 3.0); }

double expected_total_steps(const Natural& n) { return step_coefficient() * ln_at_least_two(n); }

double stochastic_upper_bound(const Natural& n) { return kUpperBoundCoefficient * ln_at_least_two(n); }

ScaledShape extremal_shape(const Natural& n) { return ScaledShape{ln_at_least_two(n), kExtremalShape}; }

Prediction predict(const Natural& n) {
  Prediction p;
  p.ln_n = ln_at_least_two(n);
  p.slope = expected_slope();
  p.expected_steps = step_coefficient() * p.ln_n;
  p.upper_bound_steps = kUpperBoundCoefficient * p.ln_n;
  p.extremal = ScaledShape{p.ln_n, kExtremalShape};
  return p;
}

std::vector<std::pair<double, double>> slope_overlay(const Natural& n) {
  const double ln_n = ln_at_least_two(n);
  return {{0.0, ln_n}, {step_coefficient() * ln_n, 0.0}};
}

std::vector<std::pair<double, double>> extremal_overlay(const Natural& n) {
  const ScaledShape s = extremal_shape(n);
  return {{0.0, s.ln_n}, {s.rise_steps(), s.peak_log()}, {s.total_steps(), 0.0}};
}

Comparison compare_log_series(std::span<const double> ln_values) {
  if (ln_values.empty()) throw DomainError("cannot compare an empty trajectory");
  Comparison c;
  c.ln_n = ln_values.front();
  c.observed_steps = ln_values.size() - 1;
  c.predicted_steps = step_coefficient() * c.ln_n;
  c.ratio = c.predicted_steps > 0 ? static_cast<double>(c.observed_steps) / c.predicted_steps : 0.0;
  const double slope = expected_slope();
  c.residuals.reserve(ln_values.size());
  double sum = 0;
  for (std::size_t k = 0; k < ln_values.size(); ++k) {
    const double r = ln_values[k] - (c.ln_n + slope * static_cast<double>(k));
    c.residuals.push_back(r);
    c.max_abs_residual = std::max(c.max_abs_residual, std::abs(r));
    sum += std::abs(r);
  }
  c.mean_abs_residual = sum / static_cast<double>(ln_values.size());
  c.small_n_caveat = c.predicted_steps < kSmallCaveatSteps;
  return c;
}

Comparison compare(const Trajectory& trajectory) {
  if (trajectory.outcome != Outcome::kReachedOne) {
    throw DomainError("compare needs a trajectory that reached 1 (outcome " + to_string(trajectory.outcome) + ")");
  }
  if (trajectory.values.empty()) throw DomainError("compare needs stored trajectory values");
  if (trajectory.start < Natural(2)) throw DomainError("model predictions need n >= 2");
  std::vector<double> logs;
  logs.reserve(trajectory.values.size());
  for (const Natural& v : trajectory.values) logs.push_back(v.ln());
  return compare_log_series(logs);
}

}  // namespace collatz::model
