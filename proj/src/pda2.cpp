#include "saddlevr/pda2.hpp"

#include <stdexcept>

namespace saddlevr {

namespace {

void check_start(const SaddleProblem& p, const Eigen::VectorXd& x0, const Eigen::VectorXd& y0) {
  if (static_cast<std::size_t>(x0.size()) != p.d() || static_cast<std::size_t>(y0.size()) != p.n()) {
    throw std::invalid_argument("starting point has the wrong dimension");
  }
  if (!x0.allFinite() || !p.primal().contains(x0)) {
    throw std::domain_error("x0 outside the primal domain");
  }
  if (!y0.allFinite() || !p.dual_feasible(y0)) throw std::domain_error("y0 outside the dual domain");
}

}  // namespace

Pda2Solver::Pda2Solver(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd& y0, std::optional<double> lipschitz)
    : p_(problem),
      sched_(problem.sigma(), problem.gamma(), lipschitz.value_or(problem.R())),
      x0_(x0),
      y0_(y0),
      x_(x0),
      x_prev_(x0),
      x_bar_(x0),
      y_(y0),
      P_(Eigen::VectorXd::Zero(y0.size())),
      Q_(Eigen::VectorXd::Zero(x0.size())),
      Sx_(Eigen::VectorXd::Zero(x0.size())),
      Sy_(Eigen::VectorXd::Zero(y0.size())),
      bx_(y0.size()) {
  check_start(problem, x0, y0);
}

void Pda2Solver::step() {
  const double a_prev = sched_.a();
  const double a = sched_.next();
  const double A = sched_.A();
  const double ratio = a_prev / a;
  const auto& m = p_.matrix();
  const std::size_t n = p_.n();
  const double inv_n = 1.0 / static_cast<double>(n);

  x_bar_ = x_ + ratio * (x_ - x_prev_);

  const double wy = A * inv_n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    P_[ii] -= a * inv_n * m.row(i).dot(x_bar_);
    y_[ii] = p_.dual(i).prox(y0_[ii] - P_[ii], wy);
  }

  Q_ += (a * inv_n) * m.transpose_times(y_);
  x_prev_ = x_;
  p_.primal().prox(x0_ - Q_, A, x_);

  Sx_ += a * x_;
  Sy_ += a * y_;
}

Eigen::VectorXd Pda2Solver::x_avg() const {
  if (sched_.A() == 0.0) return x0_;
  Eigen::VectorXd out = Sx_ / sched_.A();
  project_primal(p_, out);
  return out;
}

Eigen::VectorXd Pda2Solver::y_avg() const {
  if (sched_.A() == 0.0) return y0_;
  Eigen::VectorXd out = Sy_ / sched_.A();
  project_dual(p_, out);
  return out;
}

Pda2Result pda2_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                    const Eigen::VectorXd& y0, std::size_t K, const Pda2RunOptions& opts) {
  if (K == 0) throw std::invalid_argument("pda2_run: K must be positive");
  if (opts.track_sup_gap && !problem.bounded()) {
    throw std::invalid_argument("pda2_run: sup-gap tracking needs bounded domains");
  }
  Pda2Solver s(problem, x0, y0, opts.lipschitz);
  Pda2Result out;
  out.A.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    s.step();
    out.A.push_back(s.A());
    if (opts.track_sup_gap) out.sup_gap.push_back(sup_gap_box_game(problem, s.x_avg(), s.y_avg()));
    if (opts.observer) opts.observer(s);
  }
  out.x_avg = s.x_avg();
  out.y_avg = s.y_avg();
  out.x = s.x();
  out.y = s.y();
  return out;
}

}  // namespace saddlevr
