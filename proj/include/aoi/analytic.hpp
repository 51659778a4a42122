#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aoi/model.hpp"

namespace aoi {

// Roots of x^2 + b x + c, ascending. Uses the cancellation-free form
// q = -(b + sign(b) sqrt(disc)) / 2, roots q and c / q.
// Throws OutOfDomain when the discriminant is negative.
std::pair<double, double> real_quadratic_roots(double b, double c);

// Closed-form spectrum of the level recursion of the chain.
//
// The ladder obeys A_i = H A_{i-1} with A_i = [pi_{i+1}, pi'_{i+1}, pi_i, pi'_i].
// H has eigenvalues {0, 1, eig_small, eig_large}; the stationary solution
// only excites the two roots of
//   p(l) = l^2 - l (r1 + r5 - 1) + r3 r5.
struct SpectralDecomposition {
  // Ratios r1..r5 of the detailed-balance recursion, stored at index 0..4:
  //   r1 = 1 + lambda/mu1 - mu2 lambda2 / (mu1 (mu2 + lambda1))
  //   r2 = mu2 lambda1 / (mu1 (mu2 + lambda1))
  //   r3 = lambda1 / mu1
  //   r4 = lambda2 / (mu2 + lambda1)
  //   r5 = lambda1 / (mu2 + lambda1)
  std::array<double, 5> ratios{};
  double eig_small = 0.0;  // 0 < eig_small < eig_large < 1 when stable
  double eig_large = 0.0;
  // Eigenvectors [l(l - r5), l r4, l - r5, r4], last component r4 (not unit norm).
  Eigen::Vector4d vec_small = Eigen::Vector4d::Zero();
  Eigen::Vector4d vec_large = Eigen::Vector4d::Zero();
  // A_0 = mix (vec_large - vec_small) pi0; mix = 1 / (eig_large - eig_small).
  double mix = 0.0;

  double ratio(int one_based) const { return ratios[static_cast<std::size_t>(one_based - 1)]; }
  // p(l) evaluated at l.
  double characteristic(double l) const;
};

SpectralDecomposition spectral(const ModelParams& params);

// 4x4 level-to-level transfer matrix H = [[C, D], [I, 0]].
Eigen::Matrix4d level_transfer_matrix(const ModelParams& params);

struct LadderEntry {
  double ordinary = 0.0;  // pi_i: serving an ordinary packet, i - 1 waiting
  double priority = 0.0;  // pi'_i: serving a priority packet, i - 1 ordinary waiting
};

struct StationaryDistribution {
  double pi0 = 0.0;
  std::vector<LadderEntry> ladder;  // ladder[k] holds level i = k + 1
  double tail_mass = 0.0;           // 1 - pi0 - sum(ladder)

  std::size_t levels() const { return ladder.size(); }
  const LadderEntry& level(std::size_t i) const { return ladder.at(i - 1); }
};

// At least ceil(ln(1e-10 / pi0) / ln(eig_large)), extended until the discarded
// mass is below 1e-10; clamped to [8, 1e5].
std::size_t default_ladder_length(const ModelParams& params);

// Closed spectral form. Falls back to the recursion path when the two roots
// coincide (only reachable at lambda2 = 0).
StationaryDistribution stationary(const ModelParams& params, std::size_t i_max);
StationaryDistribution stationary(const ModelParams& params);

// Same ladder obtained by iterating A_i = H A_{i-1} from A_0.
StationaryDistribution stationary_by_recursion(const ModelParams& params, std::size_t i_max);

// Upper edge of the MGF strip: phi_N(s) is finite iff s < bound.
double queue_length_mgf_bound(const ModelParams& params);
double queue_length_mgf(const ModelParams& params, double s);

// Mean number of ordinary packets in the system.
double expected_queue_length(const ModelParams& params);

// Average peak age of the ordinary stream: 1/lambda1 + E[N]/lambda1.
double peak_age_ordinary(const ModelParams& params);

// Average age of the priority stream, 1/mu2 + 1/lambda2. No stability needed.
double priority_age(const ModelParams& params);

// Average age of a single-stream M/M/1 FCFS queue.
double reference_mm1_age(double lambda1, double mu1);

}  // namespace aoi
