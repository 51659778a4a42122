#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "aoi/errors.hpp"
#include "aoi/model.hpp"

namespace aoi {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no aoi::Error thrown";
  return ErrorCode::kInvalidConfig;
}

TEST(ModelParams, Accessors) {
  const ModelParams p{2, 5, 10, 5};
  EXPECT_DOUBLE_EQ(p.lambda(), 7.0);
  EXPECT_DOUBLE_EQ(p.p1(), 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(p.p2(), 5.0 / 7.0);
  EXPECT_EQ(p.p1() + p.p2(), 1.0);
}

TEST(ModelParams, RejectsInvalidRates) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([] { ModelParams(0, 5, 10, 5); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([] { ModelParams(2, -1, 10, 5); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([] { ModelParams(2, 5, 0, 5); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([] { ModelParams(2, 5, 10, -5); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([&] { ModelParams(inf, 5, 10, 5); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([] { ModelParams(2, std::nan(""), 10, 5); }), ErrorCode::kInvalidRate);
  EXPECT_NO_THROW(ModelParams(2, 0, 10, 5));
}

TEST(Stability, ReferencePoint) {
  const StabilityReport r = check_stability({2, 5, 10, 5});
  EXPECT_DOUBLE_EQ(r.margin, 6.0);
  EXPECT_TRUE(r.is_stable);
  ASSERT_TRUE(r.pi0);
  EXPECT_DOUBLE_EQ(*r.pi0, 0.3);
}

TEST(Stability, NoPriorityLimit) {
  EXPECT_NEAR(*check_stability({2, 1e-12, 10, 5}).pi0, 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(*check_stability({2, 0, 10, 5}).pi0, 0.8);
}

TEST(Stability, BoundaryIsUnstable) {
  const StabilityReport r = check_stability({2, 20, 10, 5});
  EXPECT_EQ(r.margin, 0.0);
  EXPECT_FALSE(r.is_stable);
  EXPECT_FALSE(r.pi0);
  EXPECT_EQ(code_of([] { require_stable({2, 20, 10, 5}); }), ErrorCode::kUnstableSystem);
  EXPECT_EQ(code_of([] { require_stable({2, 25, 10, 5}); }), ErrorCode::kUnstableSystem);
}

TEST(Stability, NearBoundaryRefused) {
  const ModelParams p{2, 20 - 1e-9, 10, 5};
  EXPECT_TRUE(check_stability(p).is_stable);
  EXPECT_EQ(code_of([&] { require_stable(p); }), ErrorCode::kNearBoundary);
}

TEST(Errors, MessageCarriesCode) {
  const Error e(ErrorCode::kOutOfDomain, "s too large");
  EXPECT_EQ(e.code(), ErrorCode::kOutOfDomain);
  EXPECT_NE(std::string(e.what()).find("OutOfDomain"), std::string::npos);
}

}  // namespace
}  // namespace aoi
