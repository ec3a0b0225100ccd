#include "saddlevr/prox.hpp"

#include <string>

namespace saddlevr {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_weight(double tau) {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw std::invalid_argument("prox weight must be finite and nonnegative");
  }
}

// max over u in [lo, hi] of a*u - b/2*u^2 - c*|u| (b >= 0, c >= 0).
double concave_max(double a, double b, double c, double lo, double hi) noexcept {
  auto f = [&](double u) { return a * u - 0.5 * b * u * u - c * std::abs(u); };
  if (b > 0.0) return f(std::clamp(soft_threshold(a, c) / b, lo, hi));
  // piecewise linear: slope a - c for u > 0, a + c for u < 0
  if ((hi == kInf && a - c > 0.0) || (lo == -kInf && a + c < 0.0)) return kInf;
  double best = -kInf;
  if (std::isfinite(lo)) best = std::max(best, f(lo));
  if (std::isfinite(hi)) best = std::max(best, f(hi));
  if (lo <= 0.0 && hi >= 0.0) best = std::max(best, 0.0);
  return best;
}

}  // namespace

double prox_box(double v, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("prox_box: lo > hi");
  require_finite(v, "prox_box input");
  return std::clamp(v, lo, hi);
}

double prox_hinge_conjugate(double v, double tau) {
  require_finite(v, "prox input");
  require_weight(tau);
  return ScalarProx::hinge().prox(v, tau);
}

double prox_lad_conjugate(double v, double tau, double c) {
  require_finite(v, "prox input");
  require_finite(c, "LAD target");
  require_weight(tau);
  return ScalarProx::lad(c).prox(v, tau);
}

Eigen::VectorXd prox_elastic_net(const Eigen::VectorXd& v, double tau, double lambda,
                                 double sigma) {
  require_weight(tau);
  if (!std::isfinite(lambda) || lambda < 0.0 || !std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("elastic net parameters must be finite and nonnegative");
  }
  if (!v.allFinite()) throw std::invalid_argument("prox input must be finite");
  Eigen::VectorXd out(v.size());
  PrimalProx::elastic_net(lambda, sigma).prox(v, tau, out);
  return out;
}

ScalarProx ScalarProx::box(double lo, double hi, double mu) {
  if (lo > hi) throw std::invalid_argument("ScalarProx::box: lo > hi");
  if (mu < 0.0) throw std::invalid_argument("ScalarProx::box: mu < 0");
  return {0.0, mu, lo, hi};
}

double ScalarProx::value(double y) const {
  if (!contains(y)) {
    throw std::domain_error("dual coordinate " + std::to_string(y) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return eta * y + 0.5 * mu * y * y;
}

double ScalarProx::conjugate(double t) const noexcept {
  return concave_max(t - eta, mu, 0.0, lo, hi);
}

PrimalProx PrimalProx::elastic_net(double lambda, double sigma) {
  if (lambda < 0.0 || sigma < 0.0) {
    throw std::invalid_argument("elastic net parameters must be nonnegative");
  }
  return {lambda, sigma, -kInf, kInf};
}

PrimalProx PrimalProx::box(double lo, double hi, double sigma) {
  if (lo > hi) throw std::invalid_argument("PrimalProx::box: lo > hi");
  if (sigma < 0.0) throw std::invalid_argument("PrimalProx::box: sigma < 0");
  return {0.0, sigma, lo, hi};
}

bool PrimalProx::contains(const Eigen::VectorXd& x) const noexcept {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lo && x[j] <= hi)) return false;
  }
  return true;
}

double PrimalProx::value(const Eigen::VectorXd& x) const {
  if (!x.allFinite()) throw std::domain_error("primal point is not finite");
  if (!contains(x)) throw std::domain_error("primal point outside the regularizer domain");
  return lambda * x.lpNorm<1>() + 0.5 * sigma * x.squaredNorm();
}

double PrimalProx::conjugate(const Eigen::VectorXd& s) const noexcept {
  double total = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) total += concave_max(s[j], sigma, lambda, lo, hi);
  return total;
}

}  // namespace saddlevr
