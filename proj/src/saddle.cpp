#include "saddlevr/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace saddlevr {

SaddleProblem::SaddleProblem(std::shared_ptr<const SparseRowMatrix> matrix,
                             std::vector<ScalarProx> dual, PrimalProx primal,
                             std::optional<double> lipschitz_R)
    : matrix_(std::move(matrix)), dual_(std::move(dual)), primal_(primal) {
  if (!matrix_) throw std::invalid_argument("SaddleProblem: null matrix");
  if (dual_.size() != matrix_->rows()) {
    throw std::invalid_argument("SaddleProblem: " + std::to_string(dual_.size()) +
                                " dual conjugates for " + std::to_string(matrix_->rows()) +
                                " rows");
  }
  if (matrix_->rows() == 0) throw std::invalid_argument("SaddleProblem: empty matrix");
  const double nd = static_cast<double>(n());
  gamma_ = kInf;
  for (const auto& g : dual_) {
    if (g.lo > g.hi) throw std::invalid_argument("SaddleProblem: empty dual interval");
    if (!(g.mu >= 0.0)) throw std::invalid_argument("SaddleProblem: negative dual modulus");
    gamma_ = std::min(gamma_, g.mu / nd);
  }
  if (!(primal_.sigma >= 0.0) || !(primal_.lambda >= 0.0) || primal_.lo > primal_.hi) {
    throw std::invalid_argument("SaddleProblem: invalid primal regularizer");
  }
  R_prime_ = matrix_->max_row_norm();
  for (std::size_t i = 0; i < n(); ++i) {
    if (matrix_->row_norm(i) > R_prime_) throw std::logic_error("SaddleProblem: row norm cache");
  }
  if (lipschitz_R) {
    if (!(*lipschitz_R > 0.0) || !std::isfinite(*lipschitz_R)) {
      throw std::invalid_argument("SaddleProblem: R must be positive and finite");
    }
    if (*lipschitz_R > R_prime_ * (1.0 + 1e-12)) {
      throw std::invalid_argument("SaddleProblem: R exceeds R' = max row norm");
    }
    R_ = *lipschitz_R;
  } else {
    R_ = R_prime_;
  }
}

bool SaddleProblem::dual_feasible(const Eigen::VectorXd& y) const noexcept {
  if (static_cast<std::size_t>(y.size()) != n()) return false;
  for (std::size_t i = 0; i < n(); ++i) {
    if (!dual_[i].contains(y[static_cast<Eigen::Index>(i)])) return false;
  }
  return true;
}

bool SaddleProblem::bounded() const noexcept {
  if (!primal_.bounded()) return false;
  for (const auto& g : dual_) {
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) return false;
  }
  return true;
}

double SaddleProblem::primal_diameter_sq() const {
  if (!primal_.bounded()) throw std::invalid_argument("primal domain is unbounded");
  const double w = primal_.hi - primal_.lo;
  return static_cast<double>(d()) * w * w;
}

double SaddleProblem::dual_diameter_sq() const {
  double total = 0.0;
  for (const auto& g : dual_) {
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) {
      throw std::invalid_argument("dual domain is unbounded");
    }
    total += (g.hi - g.lo) * (g.hi - g.lo);
  }
  return total;
}

double SaddleProblem::frobenius_bound() const noexcept {
  double s = 0.0;
  for (double r : matrix_->row_norms()) s += r * r;
  return std::sqrt(s) / static_cast<double>(n());
}

namespace {

void check_sizes(const SaddleProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(x.size()) != p.d() || static_cast<std::size_t>(y.size()) != p.n()) {
    throw std::invalid_argument("dimension mismatch");
  }
}

double dual_penalty(const SaddleProblem& p, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) s += p.dual(i).value(y[static_cast<Eigen::Index>(i)]);
  return s / static_cast<double>(p.n());
}

}  // namespace

double lagrangian(const SaddleProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_sizes(p, x, y);
  const double nd = static_cast<double>(p.n());
  const double coupling = y.dot(p.matrix().times(x)) / nd;
  return coupling - dual_penalty(p, y) + p.primal().value(x);
}

double gap_uv(const SaddleProblem& p, const GapProbe& probe, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  return lagrangian(p, x, probe.v) - lagrangian(p, probe.u, y);
}

double primal_value(const SaddleProblem& p, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != p.d()) throw std::invalid_argument("dimension mismatch");
  const Eigen::VectorXd bx = p.matrix().times(x);
  double loss = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) loss += p.dual(i).conjugate(bx[static_cast<Eigen::Index>(i)]);
  return p.primal().value(x) + loss / static_cast<double>(p.n());
}

double dual_value(const SaddleProblem& p, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != p.n()) throw std::invalid_argument("dimension mismatch");
  const Eigen::VectorXd s = -p.matrix().transpose_times(y) / static_cast<double>(p.n());
  return -dual_penalty(p, y) - p.primal().conjugate(s);
}

double sup_gap_box_game(const SaddleProblem& p, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y) {
  if (!p.bounded()) throw std::invalid_argument("sup_gap_box_game: unbounded domains");
  check_sizes(p, x, y);
  return primal_value(p, x) - dual_value(p, y);
}

double primal_value_svm(const LabeledDataset& data, const Eigen::VectorXd& x, double lambda,
                        double sigma) {
  if (!x.allFinite()) throw std::invalid_argument("primal_value_svm: non-finite x");
  const auto& m = data.matrix;
  if (static_cast<std::size_t>(x.size()) != m.cols()) throw std::invalid_argument("dimension mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    loss += std::max(1.0 - data.labels[i] * m.row(i).dot(x), 0.0);
  }
  return loss / static_cast<double>(m.rows()) + lambda * x.lpNorm<1>() +
         0.5 * sigma * x.squaredNorm();
}

double primal_value_lad(const LabeledDataset& data, const Eigen::VectorXd& x,
                        const PrimalProx& reg) {
  const auto& m = data.matrix;
  if (static_cast<std::size_t>(x.size()) != m.cols()) throw std::invalid_argument("dimension mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) loss += std::abs(m.row(i).dot(x) - data.labels[i]);
  return loss / static_cast<double>(m.rows()) + reg.value(x);
}

SaddleProblem make_svm_problem(const LabeledDataset& data, double lambda, double sigma) {
  auto folded = std::make_shared<const SparseRowMatrix>(fold_labels(data));
  std::vector<ScalarProx> dual(folded->rows(), ScalarProx::hinge());
  return SaddleProblem(std::move(folded), std::move(dual), PrimalProx::elastic_net(lambda, sigma));
}

SaddleProblem make_lad_problem(const LabeledDataset& data, double lambda, double sigma) {
  if (data.labels.size() != data.matrix.rows()) throw std::invalid_argument("label count mismatch");
  auto rows = std::make_shared<const SparseRowMatrix>(data.matrix);
  std::vector<ScalarProx> dual;
  dual.reserve(rows->rows());
  for (double c : data.labels) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite LAD target");
    dual.push_back(ScalarProx::lad(c));
  }
  return SaddleProblem(std::move(rows), std::move(dual), PrimalProx::elastic_net(lambda, sigma));
}

SaddleProblem make_box_game(std::shared_ptr<const SparseRowMatrix> rows, double sigma,
                            double gamma, std::optional<double> lipschitz_R) {
  if (!rows) throw std::invalid_argument("make_box_game: null matrix");
  if (!(gamma >= 0.0)) throw std::invalid_argument("make_box_game: gamma < 0");
  const double mu = static_cast<double>(rows->rows()) * gamma;
  std::vector<ScalarProx> dual(rows->rows(), ScalarProx::box(-1.0, 1.0, mu));
  return SaddleProblem(std::move(rows), std::move(dual), PrimalProx::box(-1.0, 1.0, sigma),
                       lipschitz_R);
}

void project_primal(const SaddleProblem& p, Eigen::VectorXd& x) noexcept {
  x = x.cwiseMax(p.primal().lo).cwiseMin(p.primal().hi);
}

void project_dual(const SaddleProblem& p, Eigen::VectorXd& y) noexcept {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto& g = p.dual(static_cast<std::size_t>(i));
    y[i] = std::clamp(y[i], g.lo, g.hi);
  }
}

std::size_t count_nnz(const Eigen::VectorXd& x, double threshold) noexcept {
  std::size_t c = 0;
  for (Eigen::Index j = 0; j < x.size(); ++j) c += std::abs(x[j]) > threshold ? 1 : 0;
  return c;
}

}  // namespace saddlevr
