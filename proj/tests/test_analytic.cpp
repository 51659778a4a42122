#include <gtest/gtest.h>

#include <cmath>

#include "aoi/analytic.hpp"
#include "aoi/errors.hpp"
#include "aoi/oracles.hpp"

namespace aoi {
namespace {

const ModelParams kRef{2, 5, 10, 5};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no aoi::Error thrown";
  return ErrorCode::kInvalidConfig;
}

TEST(QuadraticRoots, StableFormSmallRoot) {
  const auto [lo, hi] = real_quadratic_roots(-1e8, 1.0);
  EXPECT_NEAR(lo, 1e-8, 1e-22);
  EXPECT_NEAR(hi, 1e8, 1e-6);
  const auto [a, b] = real_quadratic_roots(-3.0, 2.0);
  EXPECT_DOUBLE_EQ(a, 1.0);
  EXPECT_DOUBLE_EQ(b, 2.0);
}

TEST(Spectral, ReferencePoint) {
  const SpectralDecomposition sd = spectral(kRef);
  EXPECT_NEAR(sd.ratio(1), 1.342857142857143, 1e-12);
  EXPECT_DOUBLE_EQ(sd.ratio(5), 2.0 / 7.0);
  EXPECT_NEAR(sd.eig_small, 0.110244902041633, 1e-12);
  EXPECT_NEAR(sd.eig_large, 0.518326526529796, 1e-12);
  EXPECT_NEAR(sd.characteristic(sd.eig_small), 0.0, 1e-12);
  EXPECT_NEAR(sd.characteristic(sd.eig_large), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(sd.mix, 1.0 / (sd.eig_large - sd.eig_small));
  EXPECT_DOUBLE_EQ(sd.vec_large[3], sd.ratio(4));
}

TEST(Spectral, EigenvectorsOfTransferMatrix) {
  const SpectralDecomposition sd = spectral(kRef);
  const Eigen::Matrix4d h = level_transfer_matrix(kRef);
  EXPECT_LT((h * sd.vec_small - sd.eig_small * sd.vec_small).norm(), 1e-12);
  EXPECT_LT((h * sd.vec_large - sd.eig_large * sd.vec_large).norm(), 1e-12);
}

TEST(Spectral, RandomPointsVietaAndRange) {
  for (const ModelParams& p : oracle::random_stable_points(50, 11)) {
    const SpectralDecomposition sd = spectral(p);
    EXPECT_NEAR(sd.eig_small * sd.eig_large, sd.ratio(3) * sd.ratio(5), 1e-12);
    EXPECT_NEAR(sd.eig_small + sd.eig_large, sd.ratio(1) + sd.ratio(5) - 1.0, 1e-12);
    EXPECT_GT(sd.eig_small, 0.0);
    EXPECT_LT(sd.eig_small, sd.eig_large);
    EXPECT_LT(sd.eig_large, 1.0);
    const double p1 = (p.mu1() * p.mu2() - p.lambda1() * (p.mu2() + p.lambda2())) /
                      (p.mu1() * (p.mu2() + p.lambda1()));
    EXPECT_NEAR(sd.characteristic(1.0), p1, 1e-12);
  }
}

TEST(Spectral, UnstableRejected) {
  EXPECT_EQ(code_of([] { spectral({2, 20, 10, 5}); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([] { stationary({2, 25, 10, 5}, 10); }), ErrorCode::kUnstableSystem);
}

TEST(Stationary, FirstLevelReference) {
  const StationaryDistribution d = stationary(kRef, 10);
  EXPECT_DOUBLE_EQ(d.pi0, 0.3);
  EXPECT_NEAR(d.level(1).ordinary, 0.3 * (7.0 / 10.0 - 25.0 / 70.0), 1e-14);
  EXPECT_NEAR(d.level(1).priority, 0.3 * 5.0 / 7.0, 1e-14);
}

TEST(Stationary, DetailedBalanceFirstPriorityLevel) {
  for (const ModelParams& p : oracle::random_stable_points(20, 3)) {
    const StationaryDistribution d = stationary(p, 5);
    EXPECT_NEAR(d.level(1).priority, d.pi0 * p.lambda2() / (p.lambda1() + p.mu2()), 1e-13);
  }
}

TEST(Stationary, DualPathAgreement) {
  const StationaryDistribution a = stationary(kRef, 50);
  const StationaryDistribution b = stationary_by_recursion(kRef, 50);
  for (std::size_t i = 1; i <= 50; ++i) {
    EXPECT_NEAR(a.level(i).ordinary, b.level(i).ordinary, 1e-10) << i;
    EXPECT_NEAR(a.level(i).priority, b.level(i).priority, 1e-10) << i;
  }
}

TEST(Stationary, NormalizationAndGeometricDecay) {
  for (const ModelParams& p : oracle::random_stable_points(20, 5)) {
    const StationaryDistribution d = stationary(p);
    EXPECT_LT(std::abs(d.tail_mass), 1e-8);
    EXPECT_GE(d.tail_mass, -1e-12);
    const double l2 = spectral(p).eig_large;
    double bound = 0.0;
    for (std::size_t i = 1; i <= d.levels(); ++i) {
      const auto& e = d.level(i);
      EXPECT_GE(e.ordinary, 0.0);
      EXPECT_LE(e.ordinary, 1.0);
      EXPECT_GE(e.priority, 0.0);
      EXPECT_LE(e.priority, 1.0);
      bound = std::max(bound, (e.ordinary + e.priority) / std::pow(l2, static_cast<double>(i)));
    }
    EXPECT_TRUE(std::isfinite(bound));
  }
}

TEST(Stationary, DefaultLadderLength) {
  const std::size_t n = default_ladder_length(kRef);
  EXPECT_GE(n, static_cast<std::size_t>(std::ceil(std::log(1e-10 / 0.3) / std::log(0.518326526529796))));
  EXPECT_EQ(default_ladder_length({0.1, 0.1, 20, 20}), 8u);
  for (double l2 : {10.0, 19.0, 19.9, 19.99}) {
    const StationaryDistribution d = stationary({2, l2, 10, 5});
    EXPECT_LT(std::abs(d.tail_mass), 1e-9) << l2;
  }
  EXPECT_EQ(code_of([] { stationary(kRef, 0); }), ErrorCode::kInvalidConfig);
}

TEST(QueueLength, ClosedForm) {
  EXPECT_NEAR(expected_queue_length(kRef), 1.0, 1e-14);
  EXPECT_NEAR(expected_queue_length({2, 1e-12, 10, 5}), 0.25, 1e-10);
  EXPECT_GT(expected_queue_length({2, 19.999, 10, 5}), 1e3);
  EXPECT_EQ(code_of([] { expected_queue_length({2, 20, 10, 5}); }), ErrorCode::kUnstableSystem);
}

TEST(QueueLength, MgfNormalizationAndDerivative) {
  for (const ModelParams& p : oracle::random_stable_points(20, 9)) {
    EXPECT_NEAR(queue_length_mgf(p, 0.0), 1.0, 1e-12);
    const double h = 1e-6;
    const double d = (queue_length_mgf(p, h) - queue_length_mgf(p, -h)) / (2 * h);
    const double en = expected_queue_length(p);
    EXPECT_NEAR(d, en, 1e-5 * std::max(1.0, en));
  }
}

TEST(QueueLength, MgfAgreesWithLadderSum) {
  const StationaryDistribution d = stationary(kRef, 400);
  const double s = 0.3;
  double sum = d.pi0;
  for (std::size_t i = 1; i <= d.levels(); ++i) {
    sum += std::exp(s * i) * d.level(i).ordinary + std::exp(s * (i - 1.0)) * d.level(i).priority;
  }
  EXPECT_NEAR(queue_length_mgf(kRef, s), sum, 1e-10);
}

TEST(QueueLength, MgfDomain) {
  const double edge = -std::log(spectral(kRef).eig_large);
  EXPECT_NEAR(queue_length_mgf_bound(kRef), edge, 1e-12);
  EXPECT_TRUE(std::isfinite(queue_length_mgf(kRef, edge - 0.01)));
  EXPECT_EQ(code_of([&] { queue_length_mgf(kRef, edge + 0.1); }), ErrorCode::kOutOfDomain);
  EXPECT_EQ(code_of([&] { queue_length_mgf(kRef, edge); }), ErrorCode::kOutOfDomain);
}

TEST(PeakAge, Values) {
  EXPECT_NEAR(peak_age_ordinary(kRef), 1.0, 1e-14);
  EXPECT_NEAR(peak_age_ordinary({2, 0, 10, 5}), 0.625, 1e-14);
  for (const ModelParams& p : oracle::random_stable_points(10, 2)) {
    EXPECT_NEAR(peak_age_ordinary(p), (1.0 + expected_queue_length(p)) / p.lambda1(), 1e-12);
  }
}

TEST(PeakAge, IncreasingOnLambda2Grid) {
  double prev_peak = 0.0, prev_n = 0.0;
  for (int k = 1; k <= 38; ++k) {
    const ModelParams p{2, 0.5 * k, 10, 5};
    const double peak = peak_age_ordinary(p), n = expected_queue_length(p);
    EXPECT_GT(peak, prev_peak);
    EXPECT_GT(n, prev_n);
    prev_peak = peak;
    prev_n = n;
  }
}

TEST(PriorityAge, Values) {
  EXPECT_DOUBLE_EQ(priority_age(kRef), 0.4);
  EXPECT_NEAR(priority_age({2, 1e12, 10, 5}), 0.2, 1e-11);
  EXPECT_DOUBLE_EQ(priority_age({50, 5, 1, 5}), 0.4);
  EXPECT_EQ(code_of([] { priority_age({2, 0, 10, 5}); }), ErrorCode::kInvalidRate);
}

TEST(ReferenceAge, Values) {
  EXPECT_NEAR(reference_mm1_age(2, 10), 0.605, 1e-14);
  EXPECT_GT(reference_mm1_age(1e-6, 10), 0.9e6);
  EXPECT_EQ(code_of([] { reference_mm1_age(10, 10); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([] { reference_mm1_age(-1, 10); }), ErrorCode::kInvalidRate);
}

TEST(Boundary, StableOnlyOperationsNeverReturnNumbers) {
  const ModelParams p{2, 20, 10, 5};
  EXPECT_EQ(code_of([&] { stationary(p); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([&] { stationary_by_recursion(p, 5); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([&] { queue_length_mgf(p, 0.0); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([&] { peak_age_ordinary(p); }), ErrorCode::kUnstableSystem);
  EXPECT_NO_THROW(priority_age(p));
}

TEST(Stationary, CoincidentRoots) {
  // lambda2 = 0 and mu1 = mu2 + lambda1 give a double eigenvalue 1/3.
  const ModelParams p{1, 0, 3, 2};
  const SpectralDecomposition sd = spectral(p);
  EXPECT_NEAR(sd.eig_small, 1.0 / 3.0, 1e-7);
  EXPECT_NEAR(sd.eig_large, 1.0 / 3.0, 1e-7);
  const StationaryDistribution d = stationary(p, 30);
  for (std::size_t i = 1; i <= 30; ++i) {
    EXPECT_NEAR(d.level(i).ordinary, (2.0 / 3.0) * std::pow(1.0 / 3.0, static_cast<double>(i)), 1e-14);
    EXPECT_EQ(d.level(i).priority, 0.0);
  }
}

}  // namespace
}  // namespace aoi
