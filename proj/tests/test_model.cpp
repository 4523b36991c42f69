#include <gtest/gtest.h>

#include <cmath>

#include "collatz/error.hpp"
#include "collatz/maps.hpp"
#include "collatz/model.hpp"
#include "collatz/stats.hpp"
#include "collatz/trajectory.hpp"

using namespace collatz;

namespace {
const Natural kN0 = Natural::from_string("31415926535897932384626433832795028800");
}

TEST(Model, Constants) {
  EXPECT_NEAR(model::expected_slope(), -0.14384, 1e-5);
  EXPECT_DOUBLE_EQ(model::expected_slope(), 0.5 * std::log(0.75));
  EXPECT_NEAR(model::step_coefficient(), 6.95212, 1e-5);
  EXPECT_DOUBLE_EQ(model::step_coefficient(), 2.0 / std::log(4.0 / 3.0));
  EXPECT_EQ(model::kUpperBoundCoefficient, 41.677647);
  EXPECT_DOUBLE_EQ(model::kExtremalShape.rise_steps + model::kExtremalShape.fall_steps,
                   model::kExtremalShape.total_steps);
  EXPECT_EQ(model::kExtremalShape.rise_slope, 0.1308);
  EXPECT_EQ(model::kExtremalShape.fall_slope, -0.1453);
}

TEST(Model, LineDescendsToZero) {
  for (const Natural& n : {Natural(2), Natural(1000), kN0}) {
    EXPECT_NEAR(model::expected_total_steps(n) * std::fabs(model::expected_slope()), n.ln(), 1e-9 * n.ln());
  }
}

TEST(Model, PredictionsForN0) {
  const model::Prediction p = model::predict(kN0);
  EXPECT_NEAR(p.expected_steps, 600.25, 0.01);
  EXPECT_NEAR(p.upper_bound_steps, 41.677647 * kN0.ln(), 1e-9);
  EXPECT_NEAR(p.extremal.total_steps(), 21.55 * kN0.ln(), 1e-9);
  EXPECT_NEAR(p.extremal.peak_log(), 2 * kN0.ln(), 1e-9);
}

TEST(Model, RejectsSmallN) {
  EXPECT_THROW(model::predict(1), DomainError);
  EXPECT_THROW(model::expected_total_steps(0), DomainError);
  EXPECT_THROW(model::stochastic_upper_bound(1), DomainError);
  EXPECT_THROW(model::extremal_shape(1), DomainError);
}

TEST(Model, OverlaysSpanTheLine) {
  const auto line = model::slope_overlay(1000);
  ASSERT_GE(line.size(), 2u);
  EXPECT_DOUBLE_EQ(line.front().first, 0.0);
  EXPECT_NEAR(line.front().second, std::log(1000.0), 1e-12);
  EXPECT_NEAR(line.back().second, 0.0, 1e-9);
  const auto ext = model::extremal_overlay(1000);
  ASSERT_EQ(ext.size(), 3u);
  EXPECT_NEAR(ext[1].second, 2 * std::log(1000.0), 1e-9);
  EXPECT_NEAR(ext[2].first, 21.55 * std::log(1000.0), 1e-9);
}

TEST(Model, CompareN0) {
  const Trajectory t = iterate(t_map(), kN0, {}, true);
  const model::Comparison c = model::compare(t);
  EXPECT_EQ(c.observed_steps, 529u);
  EXPECT_NEAR(c.predicted_steps, 600.25, 0.01);
  EXPECT_NEAR(c.ratio, 529 / c.predicted_steps, 1e-12);
  EXPECT_EQ(c.residuals.size(), 530u);
  EXPECT_DOUBLE_EQ(c.residuals.front(), 0.0);
  EXPECT_FALSE(c.small_n_caveat);
}

TEST(Model, CompareSmallNCarriesCaveat) {
  const Trajectory t = iterate(t_map(), 27, {}, true);
  const model::Comparison c = model::compare(t);
  EXPECT_TRUE(c.small_n_caveat);
  EXPECT_EQ(c.observed_steps, 70u);
}

TEST(Model, CompareNeedsCompletedTrajectory) {
  const Trajectory t = iterate(t_map(), 27, {5, 100}, true);
  EXPECT_THROW(model::compare(t), DomainError);
  const Trajectory lean = iterate(t_map(), 27, {}, true, {false});
  EXPECT_THROW(model::compare(lean), DomainError);
}

TEST(Model, LogSeriesResiduals) {
  const double ln_n = std::log(100.0);
  const std::vector<double> series = {ln_n, ln_n + model::expected_slope(), ln_n};
  const model::Comparison c = model::compare_log_series(series);
  ASSERT_EQ(c.residuals.size(), 3u);
  EXPECT_NEAR(c.residuals[1], 0.0, 1e-12);
  EXPECT_NEAR(c.residuals[2], -2 * model::expected_slope(), 1e-12);
  EXPECT_NEAR(c.max_abs_residual, -2 * model::expected_slope(), 1e-12);
}

TEST(Model, EmpiricalMeanNearCoefficient) {
  // Reported rather than a tight assertion: the mean slowly approaches the model value.
  double sum = 0;
  const std::uint64_t lo = 100000, count = 10000;
  for (std::uint64_t n = lo; n < lo + count; ++n) sum = sum + static_cast<double>(*total_stopping_time(n)) / std::log(double(n));
  const double mean = sum / count;
  RecordProperty("mean_gamma", std::to_string(mean));
  EXPECT_GT(mean, 0.0);
}
