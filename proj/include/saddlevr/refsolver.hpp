#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "saddlevr/saddle.hpp"

namespace saddlevr {

/// Iterates k = 1..K of the randomized method; entry t holds iteration t+1.
struct RefTrajectory {
  std::vector<Eigen::VectorXd> x, y;
  std::vector<double> a, A;
  /// Sampled row per iteration; entry 0 (initialization) is n.
  std::vector<std::size_t> j;
};

/// Dense oracle for the randomized method. Keeps the estimate sequences as
/// explicit coefficients (quadratic weight, linear terms, per-coordinate
/// weights on g_i* and l), and re-solves every argmin and B^T y from scratch
/// each iteration. O(nd) per step; meant for small test instances only.
RefTrajectory ref_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                      const Eigen::VectorXd& y0, std::size_t K, std::uint64_t seed,
                      std::optional<double> lipschitz = std::nullopt);

}  // namespace saddlevr
