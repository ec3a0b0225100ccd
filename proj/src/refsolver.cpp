#include "saddlevr/refsolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "saddlevr/rng.hpp"

namespace saddlevr {

namespace {

// argmin_y quad/2 |y - y0|^2 + <lin, y> + sum_i gw_i g_i*(y_i)
Eigen::VectorXd solve_dual(const SaddleProblem& p, const Eigen::VectorXd& y0, double quad,
                           const Eigen::VectorXd& lin, const Eigen::VectorXd& gw) {
  Eigen::VectorXd y(y0.size());
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    y[i] = p.dual(static_cast<std::size_t>(i)).prox(y0[i] - lin[i] / quad, gw[i] / quad);
  }
  return y;
}

// argmin_x quad/2 |x - x0|^2 + <lin, x> + lw * l(x)
Eigen::VectorXd solve_primal(const SaddleProblem& p, const Eigen::VectorXd& x0, double quad,
                             const Eigen::VectorXd& lin, double lw) {
  Eigen::VectorXd x(x0.size());
  p.primal().prox(x0 - lin / quad, lw / quad, x);
  return x;
}

}  // namespace

RefTrajectory ref_run(const SaddleProblem& problem, const Eigen::VectorXd& x0,
                      const Eigen::VectorXd& y0, std::size_t K, std::uint64_t seed,
                      std::optional<double> lipschitz) {
  const std::size_t n = problem.n();
  if (n < 2) throw std::invalid_argument("ref_run: n must be at least 2");
  if (K == 0) throw std::invalid_argument("ref_run: K must be positive");
  const double nd = static_cast<double>(n);
  const double sigma = problem.sigma();

  const Eigen::MatrixXd rows = problem.matrix().to_dense();  // b_i^T as rows
  const Eigen::MatrixXd B = rows / nd;
  double rprime = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) rprime = std::max(rprime, rows.row(i).norm());
  if (lipschitz) rprime = *lipschitz;

  RefTrajectory out;
  IndexSampler sampler(seed, n);

  // psi~_1, phi~_1 with weight a~_1, then scaled by n.
  const double at1 = 1.0 / (2.0 * rprime);
  double quad_y = 1.0, quad_x = 1.0;
  Eigen::VectorXd lin_y = at1 * (-B * x0);
  Eigen::VectorXd gw = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), at1 / nd);
  Eigen::VectorXd y = solve_dual(problem, y0, quad_y, lin_y, gw);
  Eigen::VectorXd z = B.transpose() * y;
  Eigen::VectorXd lin_x = at1 * z;
  double lw = at1;
  Eigen::VectorXd x = solve_primal(problem, x0, quad_x, lin_x, lw);

  quad_y *= nd;
  quad_x *= nd;
  lin_y *= nd;
  gw *= nd;
  lin_x *= nd;
  lw *= nd;

  double a = nd * at1, A = a;
  out.x.push_back(x);
  out.y.push_back(y);
  out.a.push_back(a);
  out.A.push_back(A);
  out.j.push_back(n);

  Eigen::VectorXd x_prev = x0;
  double a_next = a / (nd - 1.0);
  for (std::size_t k = 2; k <= K; ++k) {
    const double a_prev = a;
    a = a_next;
    A += a;
    const Eigen::VectorXd x_bar = x + (a_prev / a) * (x - x_prev);
    const std::size_t j = sampler();
    const auto jj = static_cast<Eigen::Index>(j);

    lin_y[jj] += -a * rows.row(jj).dot(x_bar);
    gw[jj] += a;
    const Eigen::VectorXd y_new = solve_dual(problem, y0, quad_y, lin_y, gw);

    const Eigen::VectorXd z_old = B.transpose() * y;
    const Eigen::VectorXd grad = z_old + (y_new[jj] - y[jj]) * rows.row(jj).transpose();
    lin_x += a * grad;
    lw += a;
    x_prev = x;
    x = solve_primal(problem, x0, quad_x, lin_x, lw);
    y = y_new;

    a_next = std::min((1.0 + 1.0 / (nd - 1.0)) * a, std::sqrt(nd * (nd + sigma * A)) / (2.0 * rprime));

    out.x.push_back(x);
    out.y.push_back(y);
    out.a.push_back(a);
    out.A.push_back(A);
    out.j.push_back(j);
  }
  return out;
}

}  // namespace saddlevr
