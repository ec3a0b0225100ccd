#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

namespace saddlevr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double soft_threshold(double t, double s) noexcept {
  return t > s ? t - s : (t < -s ? t + s : 0.0);
}

/// Projection onto [lo, hi]. Throws if lo > hi.
double prox_box(double v, double lo, double hi);

/// Conjugate of the (label-folded) hinge loss, g*(y) = y on [-1, 0].
double prox_hinge_conjugate(double v, double tau);

/// Conjugate of |z - c|, g*(y) = c*y on [-1, 1].
double prox_lad_conjugate(double v, double tau, double c);

/// argmin_x tau*(lambda*|x|_1 + sigma/2*|x|^2) + 1/2*|x - v|^2, coordinatewise.
Eigen::VectorXd prox_elastic_net(const Eigen::VectorXd& v, double tau, double lambda,
                                 double sigma);

/// Per-coordinate dual conjugate g_i*(y) = eta*y + mu/2*y^2 restricted to the
/// interval [lo, hi]. Covers the hinge, LAD and box-game conjugates; mu > 0
/// gives a strongly convex g_i*.
///
/// The weight passed to `prox` is the full weight on g_i*; callers own every
/// 1/n scale factor.
struct ScalarProx {
  double eta = 0.0;
  double mu = 0.0;
  double lo = -kInf;
  double hi = kInf;

  static ScalarProx hinge() { return {1.0, 0.0, -1.0, 0.0}; }
  static ScalarProx lad(double target) { return {target, 0.0, -1.0, 1.0}; }
  static ScalarProx box(double lo, double hi, double mu = 0.0);

  bool contains(double y) const noexcept { return y >= lo && y <= hi; }

  /// g_i*(y); throws std::domain_error outside [lo, hi].
  double value(double y) const;

  double prox(double v, double tau) const noexcept {
    return std::clamp((v - tau * eta) / (1.0 + tau * mu), lo, hi);
  }

  /// g_i(t) = max_{y in [lo,hi]} t*y - g_i*(y). May be +inf for unbounded
  /// intervals with mu = 0.
  double conjugate(double t) const noexcept;
};

/// Separable primal regularizer
///   l(x) = lambda*|x|_1 + sigma/2*|x|^2 + indicator(lo <= x_j <= hi).
/// Elastic net uses an unbounded box; box games use lambda = 0.
struct PrimalProx {
  double lambda = 0.0;
  double sigma = 0.0;
  double lo = -kInf;
  double hi = kInf;

  static PrimalProx elastic_net(double lambda, double sigma);
  static PrimalProx box(double lo, double hi, double sigma = 0.0);

  bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(const Eigen::VectorXd& x) const noexcept;

  /// l(x); throws std::domain_error outside the box.
  double value(const Eigen::VectorXd& x) const;

  double prox_scalar(double v, double tau) const noexcept {
    return std::clamp(soft_threshold(v, tau * lambda) / (1.0 + tau * sigma), lo, hi);
  }

  void prox(const Eigen::VectorXd& v, double tau, Eigen::VectorXd& out) const noexcept {
    for (Eigen::Index j = 0; j < v.size(); ++j) out[j] = prox_scalar(v[j], tau);
  }

  /// sum_j max_{u in [lo,hi]} s_j*u - l_j(u); +inf when unbounded above.
  double conjugate(const Eigen::VectorXd& s) const noexcept;
};

}  // namespace saddlevr
