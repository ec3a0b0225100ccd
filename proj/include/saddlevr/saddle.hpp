#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "saddlevr/dataio.hpp"
#include "saddlevr/prox.hpp"

namespace saddlevr {

/// min_x max_y L(x, y) = (1/n) sum_i (y_i b_i^T x - g_i*(y_i)) + l(x),
/// i.e. B = (1/n)[b_1, ..., b_n]^T and g*(y) = (1/n) sum_i g_i*(y_i).
///
/// Immutable once built. The matrix is shared so that many problems (one per
/// sigma/lambda configuration) can reuse one loaded dataset.
class SaddleProblem {
 public:
  /// `lipschitz_R` defaults to the max row norm R'. Throws if it exceeds R'
  /// or if the conjugate list does not match the row count.
  SaddleProblem(std::shared_ptr<const SparseRowMatrix> matrix, std::vector<ScalarProx> dual,
                PrimalProx primal, std::optional<double> lipschitz_R = std::nullopt);

  const SparseRowMatrix& matrix() const noexcept { return *matrix_; }
  std::shared_ptr<const SparseRowMatrix> shared_matrix() const noexcept { return matrix_; }
  const std::vector<ScalarProx>& dual() const noexcept { return dual_; }
  const ScalarProx& dual(std::size_t i) const noexcept { return dual_[i]; }
  const PrimalProx& primal() const noexcept { return primal_; }

  std::size_t n() const noexcept { return matrix_->rows(); }
  std::size_t d() const noexcept { return matrix_->cols(); }
  double sigma() const noexcept { return primal_.sigma; }
  /// Strong convexity of g* = (1/n) sum g_i*, i.e. min_i mu_i / n.
  double gamma() const noexcept { return gamma_; }
  /// Bound on ||B|| used by the deterministic method.
  double R() const noexcept { return R_; }
  /// max_i ||b_i||.
  double R_prime() const noexcept { return R_prime_; }

  bool dual_feasible(const Eigen::VectorXd& y) const noexcept;
  bool bounded() const noexcept;

  /// D_X^2 and D_Y^2 for bounded problems.
  double primal_diameter_sq() const;
  double dual_diameter_sq() const;

  /// (1/n) sqrt(sum_i ||b_i||^2), a certified upper bound on ||B|| that is
  /// usually much tighter than R'.
  double frobenius_bound() const noexcept;

 private:
  std::shared_ptr<const SparseRowMatrix> matrix_;
  std::vector<ScalarProx> dual_;
  PrimalProx primal_;
  double gamma_ = 0.0;
  double R_ = 0.0;
  double R_prime_ = 0.0;
};

/// Comparator point (u, v) of the relaxed gap.
struct GapProbe {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

/// L(x, y). Throws std::domain_error for infeasible x or y.
double lagrangian(const SaddleProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Gap^{u,v}(x, y) = L(x, v) - L(u, y).
double gap_uv(const SaddleProblem& p, const GapProbe& probe, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);

/// P(x) = max_v L(x, v), evaluated in closed form per coordinate. For the SVM
/// problem this is the primal objective f(x).
double primal_value(const SaddleProblem& p, const Eigen::VectorXd& x);

/// D(y) = min_u L(u, y); -inf where the minimum is unbounded.
double dual_value(const SaddleProblem& p, const Eigen::VectorXd& y);

/// Exact primal-dual gap P(x) - D(y). Requires bounded primal and dual
/// domains (throws std::invalid_argument otherwise).
double sup_gap_box_game(const SaddleProblem& p, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y);

/// (1/n) sum max(1 - c_i b_i^T x, 0) + lambda |x|_1 + sigma/2 |x|^2 on the
/// unfolded dataset.
double primal_value_svm(const LabeledDataset& data, const Eigen::VectorXd& x, double lambda,
                        double sigma);

/// (1/n) sum |b_i^T x - c_i| + l(x), with c_i the dataset labels.
double primal_value_lad(const LabeledDataset& data, const Eigen::VectorXd& x,
                        const PrimalProx& reg);

// Problem builders. Rows are used as given; normalization is the caller's call.

/// Elastic-net SVM on label-folded rows: g_i* = hinge conjugate.
SaddleProblem make_svm_problem(const LabeledDataset& data, double lambda, double sigma);

/// Least absolute deviation with targets taken from the labels.
SaddleProblem make_lad_problem(const LabeledDataset& data, double lambda, double sigma);

/// Box game: l = indicator([-1,1]^d) + sigma/2|x|^2, g_i* = indicator([-1,1]) +
/// (n*gamma)/2 y^2 so that g* is gamma-strongly convex. (0, 0) is a saddle point.
SaddleProblem make_box_game(std::shared_ptr<const SparseRowMatrix> rows, double sigma = 0.0,
                            double gamma = 0.0, std::optional<double> lipschitz_R = std::nullopt);

/// Clip into dom(l) / the dual boxes. Weighted averages are convex
/// combinations of feasible points but can leave the domain by rounding.
void project_primal(const SaddleProblem& p, Eigen::VectorXd& x) noexcept;
void project_dual(const SaddleProblem& p, Eigen::VectorXd& y) noexcept;

std::size_t count_nnz(const Eigen::VectorXd& x, double threshold = 1e-7) noexcept;

}  // namespace saddlevr
