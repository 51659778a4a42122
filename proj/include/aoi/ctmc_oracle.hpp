#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "aoi/model.hpp"

namespace aoi {

// Truncated generator of the level chain, states ordered
// [q0, q1..qK, q'1..q'K]. Up-transitions leaving level K are dropped
// (reflecting truncation) and the diagonal is the negative row sum of what
// remains, so every row sums to zero.
class GeneratorMatrix {
 public:
  GeneratorMatrix(std::size_t truncation, Eigen::SparseMatrix<double, Eigen::RowMajor> rates);

  std::size_t truncation() const { return truncation_; }
  std::size_t dimension() const { return 2 * truncation_ + 1; }

  static std::size_t idle_index() { return 0; }
  std::size_t ordinary_index(std::size_t level) const;
  std::size_t priority_index(std::size_t level) const;

  double rate(std::size_t from, std::size_t to) const { return rates_.coeff(from, to); }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& rates() const { return rates_; }

 private:
  std::size_t truncation_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> rates_;
};

GeneratorMatrix build_generator(const ModelParams& params, std::size_t truncation);

// Boundary mass above which the truncated solution is flagged.
inline constexpr double kTailFlagThreshold = 1e-8;

struct OracleSolution {
  std::size_t truncation = 0;
  std::vector<double> probabilities;  // generator ordering
  double boundary_mass = 0.0;         // pi_K + pi'_K
  bool non_vanishing_tail = false;

  double idle() const { return probabilities[0]; }
  double ordinary(std::size_t level) const { return probabilities.at(level); }
  double priority(std::size_t level) const { return probabilities.at(truncation + level); }
  // qi holds i ordinary packets, q'i holds i - 1.
  double expected_ordinary_count() const;
};

// Solves pi Q = 0, sum(pi) = 1 by sparse LU with one balance equation
// replaced by the normalization row. Throws SingularSystem on failure.
OracleSolution solve_stationary(const GeneratorMatrix& generator);

// max(64, level where the geometric bound puts the tail of the mean count
// below 1e-12), capped at 1e5. Unstable parameters get 1e4.
std::size_t default_truncation(const ModelParams& params);

double oracle_expected_n(const ModelParams& params, std::size_t truncation);

}  // namespace aoi
