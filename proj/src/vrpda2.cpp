#include "saddlevr/vrpda2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace saddlevr {

namespace {

constexpr std::size_t kLine = 64;

inline void prefetch_range(const void* ptr, std::size_t bytes) noexcept {
  const char* c = static_cast<const char*>(ptr);
  for (std::size_t off = 0; off < bytes; off += kLine) __builtin_prefetch(c + off);
}

}  // namespace

Vrpda2Solver::Vrpda2Solver(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& y0, std::uint64_t seed,
                           const Vrpda2Options& opts)
    : p_(problem),
      sampler_(seed, problem.n()),
      sched_(problem.n(), problem.sigma(), opts.lipschitz.value_or(problem.R_prime())),
      verify_every_(opts.verify_every),
      inv_n_(1.0 / static_cast<double>(problem.n())),
      values_(problem.matrix().values().data()),
      index_(problem.matrix().col_index().data()) {
  if (problem.gamma() > 0.0) {
    throw std::invalid_argument("Vrpda2Solver: strongly convex g* (gamma > 0) is not supported");
  }
  const std::size_t n = problem.n(), d = problem.d();
  if (static_cast<std::size_t>(x0.size()) != d || static_cast<std::size_t>(y0.size()) != n) {
    throw std::invalid_argument("starting point has the wrong dimension");
  }
  if (!x0.allFinite() || !problem.primal().contains(x0)) {
    throw std::domain_error("x0 outside the primal domain");
  }
  if (!y0.allFinite() || !problem.dual_feasible(y0)) {
    throw std::domain_error("y0 outside the dual domain");
  }
  const auto& m = problem.matrix();
  x0_ = x0;

  // Iteration 1: full deterministic primal-dual step with weight 1/(2R').
  const double at1 = sched_.initial_step();
  const Eigen::VectorXd bx0 = m.times(x0);  // p~_1 = -B x0 = -bx0 / n
  const double a1 = sched_.next();
  sched_.next();  // a_2
  coord_.resize(n);
  Eigen::VectorXd y1(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    Coord& c = coord_[i];
    c.g = problem.dual(i);
    c.y0 = y0[ii];
    c.y = c.g.prox(y0[ii] + at1 * inv_n_ * bx0[ii], at1 * inv_n_);
    c.p = -a1 * inv_n_ * bx0[ii];
    c.r = a1 * inv_n_;
    c.begin = m.row_ptr()[i];
    c.end = m.row_ptr()[i + 1];
    y1[ii] = c.y;
  }
  z_ = m.transpose_times(y1) * inv_n_;
  x_.resize(static_cast<Eigen::Index>(d));
  problem.primal().prox(x0 - at1 * z_, at1, x_);
  x_prev_ = x0;

  q_ = a1 * z_;
  Sx_ = a1 * x_;
  scratch_.resize(static_cast<Eigen::Index>(d));

  k_ = 1;
  a_k_ = a1;
  A_k_ = a1;
  j_last_ = n;
  for (auto& j : ahead_) {
    j = sampler_();
    prefetch_meta(j);
  }
  prefetch_row(ahead_[0]);
  prefetch_row(ahead_[1]);
}

SparseRow Vrpda2Solver::row_of(const Coord& c) const noexcept {
  const std::size_t len = c.end - c.begin;
  return {std::span<const std::uint32_t>(index_ + c.begin, len),
          std::span<const double>(values_ + c.begin, len), len == p_.d()};
}

void Vrpda2Solver::prefetch_meta(std::size_t j) const noexcept {
  prefetch_range(&coord_[j], sizeof(Coord));
}

void Vrpda2Solver::prefetch_row(std::size_t j) const noexcept {
  const SparseRow row = row_of(coord_[j]);
  prefetch_range(row.value.data(), row.nnz() * sizeof(double));
  if (!row.dense) prefetch_range(row.index.data(), row.nnz() * sizeof(std::uint32_t));
}

void Vrpda2Solver::step() {
  a_prev_ = a_k_;
  ++k_;
  a_k_ = sched_.a();
  A_k_ = sched_.A();
  const double ratio = a_prev_ / a_k_;

  const std::size_t j = ahead_[head_];
  ahead_[head_] = sampler_();
  prefetch_meta(ahead_[head_]);
  head_ = (head_ + 1) % kAhead;
  prefetch_row(ahead_[(head_ + 1) % kAhead]);
  j_last_ = j;
  Coord& c = coord_[j];
  const SparseRow row = row_of(c);

  // b_j^T xbar_{k-1} without forming xbar.
  const double bx = row.dot(x_), bx_prev = row.dot(x_prev_);
  const double dot = (1.0 + ratio) * bx - ratio * bx_prev;

  c.p -= a_k_ * dot;
  c.r += a_k_;
  const double y_old = c.y;
  const double y_new = c.g.prox(c.y0 - inv_n_ * c.p, inv_n_ * c.r);
  const double delta = y_new - y_old;
  if (delta != 0.0) {
    c.stored += y_old * (W_ - c.mark);
    c.mark = W_;
    c.y = y_new;
  }

  q_ += a_k_ * z_;
  if (delta != 0.0) row.axpy(a_k_ * delta, q_);

  x_prev_.swap(x_);
  scratch_ = x0_ - inv_n_ * q_;
  p_.primal().prox(scratch_, inv_n_ * A_k_, x_);
  if (delta != 0.0) row.axpy(inv_n_ * delta, z_);
  Sx_ += a_k_ * x_;

  const double a_next = sched_.next();
  W_ += static_cast<double>(n()) * a_k_ - static_cast<double>(n() - 1) * a_next;

  if (verify_every_ != 0 && k_ % verify_every_ == 0) {
    const double drift = z_drift();
    if (drift > 1e-10 * (1.0 + y().norm())) {
      throw std::runtime_error("Vrpda2Solver: z drifted from B^T y by " + std::to_string(drift) +
                               " at k = " + std::to_string(k_));
    }
  }
}

Eigen::VectorXd Vrpda2Solver::gather(double Coord::*field) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(coord_.size()));
  for (std::size_t j = 0; j < coord_.size(); ++j) out[static_cast<Eigen::Index>(j)] = coord_[j].*field;
  return out;
}

Eigen::VectorXd Vrpda2Solver::y() const { return gather(&Coord::y); }
Eigen::VectorXd Vrpda2Solver::p() const { return gather(&Coord::p); }
Eigen::VectorXd Vrpda2Solver::r() const { return gather(&Coord::r); }

Eigen::VectorXd Vrpda2Solver::x_avg() const {
  Eigen::VectorXd out = Sx_ / A_k_;
  project_primal(p_, out);
  return out;
}

Eigen::VectorXd Vrpda2Solver::y_avg() const {
  if (k_ == 1) return y();
  const double tail = static_cast<double>(n() - 1) * sched_.a();
  Eigen::VectorXd out(static_cast<Eigen::Index>(coord_.size()));
  for (std::size_t j = 0; j < coord_.size(); ++j) {
    const Coord& c = coord_[j];
    out[static_cast<Eigen::Index>(j)] = (c.stored + c.y * (W_ - c.mark) + tail * c.y) / A_k_;
  }
  project_dual(p_, out);
  return out;
}

double Vrpda2Solver::z_drift() const {
  const Eigen::VectorXd fresh = p_.matrix().transpose_times(y()) * inv_n_;
  return (fresh - z_).lpNorm<Eigen::Infinity>();
}

Vrpda2Result vrpda2_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& y0, std::size_t K, std::uint64_t seed,
                        const Vrpda2Options& opts,
                        const std::function<void(const Vrpda2Solver&)>& hook,
                        std::size_t hook_every) {
  if (K == 0) throw std::invalid_argument("vrpda2_run: K must be positive");
  Vrpda2Solver s(problem, x0, y0, seed, opts);
  auto fire = [&] {
    if (hook && hook_every != 0 && s.k() % hook_every == 0) hook(s);
  };
  fire();
  while (s.k() < K) {
    s.step();
    fire();
  }
  return {s.x(), s.x_avg(), s.y(), s.y_avg(), s.A(), s.k()};
}

}  // namespace saddlevr
