#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "saddlevr/saddle.hpp"
#include "saddlevr/schedule.hpp"

namespace saddlevr {

/// Deterministic primal-dual accelerated dual averaging.
///
/// The estimate sequences are kept as their accumulated linear coefficients:
///   P = sum_i a_i * (-B xbar_{i-1}),  Q = sum_i a_i * B^T y_i,
/// so that y_k = prox_{A_k g*}(y0 - P) and x_k = prox_{A_k l}(x0 - Q).
class Pda2Solver {
 public:
  /// `lipschitz` overrides problem.R() in the step-size rule.
  Pda2Solver(const SaddleProblem& problem, const Eigen::VectorXd& x0, const Eigen::VectorXd& y0,
             std::optional<double> lipschitz = std::nullopt);

  void step();

  std::size_t k() const noexcept { return sched_.k(); }
  double a() const noexcept { return sched_.a(); }
  double A() const noexcept { return sched_.A(); }
  const Pda2Schedule& schedule() const noexcept { return sched_; }

  const Eigen::VectorXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& x_prev() const noexcept { return x_prev_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  /// Extrapolated point used in the most recent step.
  const Eigen::VectorXd& x_bar() const noexcept { return x_bar_; }
  const Eigen::VectorXd& P() const noexcept { return P_; }
  const Eigen::VectorXd& Q() const noexcept { return Q_; }

  /// Weighted averages sum a_i x_i / A_k and sum a_i y_i / A_k (x0, y0 at k = 0).
  Eigen::VectorXd x_avg() const;
  Eigen::VectorXd y_avg() const;

 private:
  const SaddleProblem& p_;
  Pda2Schedule sched_;
  Eigen::VectorXd x0_, y0_;
  Eigen::VectorXd x_, x_prev_, x_bar_, y_;
  Eigen::VectorXd P_, Q_;
  Eigen::VectorXd Sx_, Sy_;
  Eigen::VectorXd bx_;  // scratch for B xbar (unscaled)
};

struct Pda2Result {
  Eigen::VectorXd x_avg, y_avg, x, y;
  /// Exact sup-gap of the averages after each step, if requested.
  std::vector<double> sup_gap;
  /// A_k after each step.
  std::vector<double> A;
};

struct Pda2RunOptions {
  std::optional<double> lipschitz;
  /// Record sup_gap_box_game(x_avg, y_avg) per step; requires bounded domains.
  bool track_sup_gap = false;
  /// Called after every step.
  std::function<void(const Pda2Solver&)> observer;
};

Pda2Result pda2_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                    const Eigen::VectorXd& y0, std::size_t K, const Pda2RunOptions& opts = {});

}  // namespace saddlevr
