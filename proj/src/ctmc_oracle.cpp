#include "aoi/ctmc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "aoi/analytic.hpp"
#include "aoi/errors.hpp"

namespace aoi {

GeneratorMatrix::GeneratorMatrix(std::size_t truncation,
                                 Eigen::SparseMatrix<double, Eigen::RowMajor> rates)
    : truncation_(truncation), rates_(std::move(rates)) {}

std::size_t GeneratorMatrix::ordinary_index(std::size_t level) const {
  if (level < 1 || level > truncation_) throw Error(ErrorCode::kInvalidConfig, "level out of range");
  return level;
}

std::size_t GeneratorMatrix::priority_index(std::size_t level) const {
  if (level < 1 || level > truncation_) throw Error(ErrorCode::kInvalidConfig, "level out of range");
  return truncation_ + level;
}

GeneratorMatrix build_generator(const ModelParams& params, std::size_t truncation) {
  if (truncation < 2) throw Error(ErrorCode::kInvalidConfig, "truncation must be at least 2");
  const std::size_t k = truncation;
  const auto q = [](std::size_t i) { return static_cast<int>(i); };
  const auto qp = [k](std::size_t i) { return static_cast<int>(k + i); };
  const double l1 = params.lambda1(), l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(8 * k + 4);
  std::vector<double> outflow(2 * k + 1, 0.0);
  const auto add = [&](int from, int to, double rate) {
    if (rate == 0.0) return;
    entries.emplace_back(from, to, rate);
    outflow[static_cast<std::size_t>(from)] += rate;
  };

  add(q(0), q(1), l1);
  add(q(0), qp(1), l2);
  for (std::size_t i = 1; i <= k; ++i) {
    if (i < k) {
      add(q(i), q(i + 1), l1);
      add(q(i), qp(i + 1), l2);
      add(qp(i), qp(i + 1), l1);
    }
    add(q(i), q(i - 1), m1);
    add(qp(i), q(i - 1), m2);
  }
  for (std::size_t s = 0; s < outflow.size(); ++s) {
    entries.emplace_back(static_cast<int>(s), static_cast<int>(s), -outflow[s]);
  }
  const auto n = static_cast<Eigen::Index>(2 * k + 1);
  Eigen::SparseMatrix<double, Eigen::RowMajor> rates(n, n);
  rates.setFromTriplets(entries.begin(), entries.end());
  return GeneratorMatrix(k, std::move(rates));
}

double OracleSolution::expected_ordinary_count() const {
  long double total = 0.0L;
  for (std::size_t i = 1; i <= truncation; ++i) {
    total += static_cast<long double>(i) * ordinary(i) + static_cast<long double>(i - 1) * priority(i);
  }
  return static_cast<double>(total);
}

OracleSolution solve_stationary(const GeneratorMatrix& generator) {
  const auto n = static_cast<Eigen::Index>(generator.dimension());
  // pi Q = 0  <=>  Q^T pi^T = 0. Fix pi_idle = 1, drop the idle balance
  // equation, solve the remaining sparse system and normalize.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> transposed = generator.rates().transpose();
  const Eigen::Index m = n - 1;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(transposed.nonZeros()));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index row = 1; row < n; ++row) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(transposed, row); it; ++it) {
      if (it.col() == 0) {
        rhs[row - 1] -= it.value();
      } else {
        entries.emplace_back(static_cast<int>(row - 1), static_cast<int>(it.col() - 1), it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> system(m, m);
  system.setFromTriplets(entries.begin(), entries.end());

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem, "sparse LU factorization failed: " + lu.lastErrorMessage());
  }
  const Eigen::VectorXd rest = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !rest.allFinite()) {
    throw Error(ErrorCode::kSingularSystem, "stationary solve failed");
  }
  Eigen::VectorXd pi(n);
  pi[0] = 1.0;
  pi.tail(m) = rest;
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) total += pi[i];
  pi /= static_cast<double>(total);

  OracleSolution sol;
  sol.truncation = generator.truncation();
  sol.probabilities.assign(pi.data(), pi.data() + n);
  sol.boundary_mass = sol.ordinary(sol.truncation) + sol.priority(sol.truncation);
  sol.non_vanishing_tail = std::abs(sol.boundary_mass) > kTailFlagThreshold;
  return sol;
}

std::size_t default_truncation(const ModelParams& params) {
  constexpr double kUnstableSize = 1e4;
  constexpr double kCap = 1e5;
  const auto stability = check_stability(params);
  if (!stability.is_stable || stability.margin / params.mu1() < kNearBoundaryTolerance) {
    return static_cast<std::size_t>(kUnstableSize);
  }
  const double decay = spectral(params).eig_large;
  const double slack = 1.0 - decay;
  const double level = std::ceil(std::log(1e-12 * slack * slack) / std::log(decay));
  return static_cast<std::size_t>(std::clamp(level, 64.0, kCap));
}

double oracle_expected_n(const ModelParams& params, std::size_t truncation) {
  return solve_stationary(build_generator(params, truncation)).expected_ordinary_count();
}

}  // namespace aoi
