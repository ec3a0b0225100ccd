#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "saddlevr/rng.hpp"
#include "saddlevr/saddle.hpp"
#include "saddlevr/schedule.hpp"

namespace saddlevr {

struct Vrpda2Options {
  /// Replaces R' in the step-size rule (the row norms themselves are unchanged).
  std::optional<double> lipschitz;
  /// Recompute B^T y from scratch every this many steps and throw
  /// std::runtime_error if z has drifted; 0 disables the check.
#ifdef NDEBUG
  std::size_t verify_every = 0;
#else
  std::size_t verify_every = 100;
#endif
};

/// Randomized variance-reduced solver with O(d) work per step.
///
/// Coefficient vectors follow the unnormalized convention: p, q accumulate raw
/// weighted sums and every prox call divides by n. The dual average uses the
/// weights w_i = n a_i - (n-1) a_{i+1} (i >= 2) plus n a_K on the final point;
/// it is accumulated lazily per coordinate so steps stay O(d).
class Vrpda2Solver {
 public:
  /// Runs the deterministic initialization (one full pass over the rows) and
  /// leaves the solver at k = 1 with a_2 already computed.
  Vrpda2Solver(const SaddleProblem& problem, const Eigen::VectorXd& x0,
               const Eigen::VectorXd& y0, std::uint64_t seed, const Vrpda2Options& opts = {});

  /// One main-loop iteration k -> k+1.
  void step();

  /// Index of the last completed iteration (1 right after construction).
  std::size_t k() const noexcept { return k_; }
  /// a_k, A_k of the last completed iteration.
  double a() const noexcept { return a_k_; }
  double A() const noexcept { return A_k_; }
  /// Row sampled by the last step (0-based); n() before the first step.
  std::size_t last_index() const noexcept { return j_last_; }
  std::size_t n() const noexcept { return p_.n(); }
  const VrSchedule& schedule() const noexcept { return sched_; }

  const Eigen::VectorXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& x_prev() const noexcept { return x_prev_; }
  // Gathered from the per-coordinate state, O(n).
  Eigen::VectorXd y() const;
  const Eigen::VectorXd& z() const noexcept { return z_; }
  Eigen::VectorXd p() const;
  const Eigen::VectorXd& q() const noexcept { return q_; }
  Eigen::VectorXd r() const;

  /// sum a_i x_i / A_k.
  Eigen::VectorXd x_avg() const;
  /// (n a_k y_k + sum_{i=2}^{k-1} w_i y_i) / A_k; y_1 at k = 1. O(n).
  Eigen::VectorXd y_avg() const;

  /// max_j |z_j - (B^T y)_j| with B^T y recomputed from the rows.
  double z_drift() const;

 private:
  static constexpr std::size_t kAhead = 4;  // indices drawn this many steps early

  // Everything step() touches for dual coordinate j, in one 128-byte block so
  // a random row costs one adjacent cache-line pair plus the row itself.
  struct alignas(128) Coord {
    double p = 0.0, r = 0.0, y = 0.0, y0 = 0.0;
    // Lazy dual average: y contributes y * (W - mark) on top of `stored`.
    double stored = 0.0, mark = 0.0;
    ScalarProx g;
    std::size_t begin = 0, end = 0;  // row extent in the CSR arrays
  };

  SparseRow row_of(const Coord& c) const noexcept;
  void prefetch_meta(std::size_t j) const noexcept;
  void prefetch_row(std::size_t j) const noexcept;
  Eigen::VectorXd gather(double Coord::*field) const;

  const SaddleProblem& p_;
  IndexSampler sampler_;
  VrSchedule sched_;
  std::size_t verify_every_;
  double inv_n_;
  const double* values_;
  const std::uint32_t* index_;

  std::vector<Coord> coord_;
  Eigen::VectorXd x0_;
  Eigen::VectorXd x_, x_prev_, z_, q_;
  Eigen::VectorXd Sx_;
  Eigen::VectorXd scratch_;
  double W_ = 0.0;

  std::size_t k_ = 0;
  double a_k_ = 0.0, a_prev_ = 0.0, A_k_ = 0.0;
  std::array<std::size_t, kAhead> ahead_{};  // ring of upcoming indices
  std::size_t head_ = 0, j_last_ = 0;
};

struct Vrpda2Result {
  Eigen::VectorXd x, x_avg, y, y_avg;
  double A = 0.0;
  std::size_t iterations = 0;
};

/// Runs iterations 1..K (K >= 1; iteration 1 is the initialization).
/// `hook` fires after every `hook_every`-th iteration (and never if 0).
Vrpda2Result vrpda2_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& y0, std::size_t K, std::uint64_t seed,
                        const Vrpda2Options& opts = {},
                        const std::function<void(const Vrpda2Solver&)>& hook = {},
                        std::size_t hook_every = 0);

}  // namespace saddlevr
