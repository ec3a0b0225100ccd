#include "saddlevr/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saddlevr {

Pda2Schedule::Pda2Schedule(double sigma, double gamma, double lipschitz)
    : sigma_(sigma), gamma_(gamma), lipschitz_(lipschitz) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("Pda2Schedule: R must be positive and finite");
  }
  if (!(sigma >= 0.0) || !(gamma >= 0.0)) {
    throw std::invalid_argument("Pda2Schedule: sigma and gamma must be nonnegative");
  }
}

double Pda2Schedule::step_for(double A_prev) const noexcept {
  return std::sqrt((1.0 + sigma_ * A_prev) * (1.0 + gamma_ * A_prev)) / (std::sqrt(2.0) * lipschitz_);
}

double Pda2Schedule::next() {
  a_prev_ = a_;
  a_ = step_for(A_);
  A_ += a_;
  ++k_;
  return a_;
}

std::string_view to_string(VrBranch b) noexcept {
  switch (b) {
    case VrBranch::init: return "init";
    case VrBranch::geometric: return "geometric";
    case VrBranch::cap: return "cap";
    default: return "none";
  }
}

VrSchedule::VrSchedule(std::size_t n, double sigma, double rprime)
    : n_(n), sigma_(sigma), rprime_(rprime) {
  if (n < 2) throw std::invalid_argument("VrSchedule: n must be at least 2");
  if (!(rprime > 0.0) || !std::isfinite(rprime)) {
    throw std::invalid_argument("VrSchedule: R' must be positive and finite");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("VrSchedule: sigma must be nonnegative");
  growth_ = 1.0 + 1.0 / static_cast<double>(n - 1);
}

double VrSchedule::geometric_candidate() const noexcept { return growth_ * a_; }

double VrSchedule::cap_candidate() const noexcept {
  const double nd = static_cast<double>(n_);
  return std::sqrt(nd * (nd + sigma_ * A_)) / (2.0 * rprime_);
}

double VrSchedule::next() {
  const double nd = static_cast<double>(n_);
  double a_next;
  if (k_ == 0) {
    a_next = nd * initial_step();
    branch_ = VrBranch::init;
  } else if (k_ == 1) {
    a_next = a_ / (nd - 1.0);
    branch_ = VrBranch::init;
  } else {
    const double geo = geometric_candidate();
    const double cap = cap_candidate();
    if (geo <= cap) {
      a_next = geo;
      branch_ = VrBranch::geometric;
    } else {
      a_next = cap;
      branch_ = VrBranch::cap;
    }
  }
  a_prev_ = a_;
  a_ = a_next;
  A_ += a_next;
  ++k_;
  return a_;
}

RegimeConstants regime_constants(std::size_t n, double sigma, double rprime) {
  if (n < 2) throw std::invalid_argument("regime_constants: n must be at least 2");
  if (!(rprime > 0.0)) throw std::invalid_argument("regime_constants: R' must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("regime_constants: sigma must be >= 0");
  const double nd = static_cast<double>(n);
  const double s = sigma * nd * (nd - 1.0) / (4.0 * rprime);
  RegimeConstants rc;
  rc.B = s + std::sqrt(s * s + nd * nd);
  const double log_ratio = std::log(nd) - std::log(nd - 1.0);
  rc.k0 = static_cast<std::size_t>(std::ceil(std::log(rc.B) / log_ratio));
  rc.K0 = static_cast<std::size_t>(std::ceil(std::log(nd) / log_ratio));
  return rc;
}

double lower_bound_Ak(std::size_t n, double sigma, double rprime, std::size_t k,
                      std::size_t k0, std::size_t K0) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double bound = 0.0;
  if (k <= k0) {
    bound = std::max(bound, (nd - 1.0) / (2.0 * rprime) * std::pow(1.0 + 1.0 / (nd - 1.0), kd));
  }
  if (k >= k0) {
    const double t = kd - static_cast<double>(k0) + nd - 1.0;
    bound = std::max(bound, (nd - 1.0) * (nd - 1.0) * sigma /
                                ((4.0 * rprime) * (4.0 * rprime) * nd) * t * t);
  }
  if (k >= K0) {
    bound = std::max(bound, nd * (kd - static_cast<double>(K0) + nd - 1.0) / (2.0 * rprime));
  }
  return bound;
}

}  // namespace saddlevr
