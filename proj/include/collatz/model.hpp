#pragma once

#include <span>
#include <utility>
#include <vector>

#include "collatz/natural.hpp"
#include "collatz/trajectory.hpp"

namespace collatz::model {

// Downward slope of ln T^k(n) per step when parities behave like fair coin
// flips: (ln(3/2) + ln(1/2)) / 2 = ln(3/4) / 2 ≈ -0.143841.
double expected_slope();
// 2 / ln(4/3) ≈ 6.95212; steps to reach 1 per unit of ln n.
double step_coefficient();

inline constexpr double kUpperBoundCoefficient = 41.677647;

// Extremal trajectory shape, every quantity in units of ln n. The fall
// segment constants are kept as published even though 2 / 13.905 = 0.1438,
// not 0.1453.
struct ExtremalShape {
  double rise_steps = 7.645;
  double rise_slope = 0.1308;
  double peak_height = 2.0;
  double fall_steps = 13.905;
  double fall_slope = -0.1453;
  double total_steps = 21.55;
};
inline constexpr ExtremalShape kExtremalShape{};

// The shape scaled to a concrete n: steps and heights in absolute units.
struct ScaledShape {
  double ln_n = 0;
  ExtremalShape per_ln;  // unscaled coefficients
  double rise_steps() const { return per_ln.rise_steps * ln_n; }
  double peak_log() const { return per_ln.peak_height * ln_n; }
  double fall_steps() const { return per_ln.fall_steps * ln_n; }
  double total_steps() const { return per_ln.total_steps * ln_n; }
};

struct Prediction {
  double ln_n = 0;
  double slope = 0;
  double expected_steps = 0;
  double upper_bound_steps = 0;
  ScaledShape extremal;
};

// All functions below require n >= 2 and throw DomainError otherwise.
double expected_total_steps(const Natural& n);
double stochastic_upper_bound(const Natural& n);
ScaledShape extremal_shape(const Natural& n);
Prediction predict(const Natural& n);

// (k, ln x) points of the predicted straight line from ln n down to 0.
std::vector<std::pair<double, double>> slope_overlay(const Natural& n);
// (k, ln x) corners of the extremal two-segment shape.
std::vector<std::pair<double, double>> extremal_overlay(const Natural& n);

struct Comparison {
  double ln_n = 0;
  std::uint64_t observed_steps = 0;
  double predicted_steps = 0;
  double ratio = 0;  // observed / predicted
  // ln x_k - (ln x_0 + slope * k), k = 0..observed_steps.
  std::vector<double> residuals;
  double max_abs_residual = 0;
  double mean_abs_residual = 0;
  // Set when the start is too small for the asymptotic model to mean much
  // (predicted steps below kSmallCaveatSteps).
  bool small_n_caveat = false;
};
inline constexpr double kSmallCaveatSteps = 100.0;

// Requires a trajectory that reached 1 with its values stored.
Comparison compare(const Trajectory& trajectory);
// Same, from ln x_0, ln x_1, ..., ln x_m directly.
Comparison compare_log_series(std::span<const double> ln_values);

}  // namespace collatz::model
