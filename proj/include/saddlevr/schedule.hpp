#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace saddlevr {

/// Step sizes of the deterministic method:
///   a_k = sqrt((1 + sigma*A_{k-1}) * (1 + gamma*A_{k-1})) / (sqrt(2) * R),
///   A_k = A_{k-1} + a_k,  with a_0 = A_0 = 0.
class Pda2Schedule {
 public:
  Pda2Schedule(double sigma, double gamma, double lipschitz);

  /// Computes a_{k+1}, advances the index, returns the new step.
  double next();

  /// The step-size formula evaluated at an arbitrary A_{k-1}.
  double step_for(double A_prev) const noexcept;

  std::size_t k() const noexcept { return k_; }
  double a() const noexcept { return a_; }
  double a_prev() const noexcept { return a_prev_; }
  double A() const noexcept { return A_; }

 private:
  double sigma_, gamma_, lipschitz_;
  std::size_t k_ = 0;
  double a_ = 0.0, a_prev_ = 0.0, A_ = 0.0;
};

enum class VrBranch : std::uint8_t { none, init, geometric, cap };

std::string_view to_string(VrBranch b) noexcept;

/// Step sizes of the randomized method:
///   a_1 = n/(2R'),  a_2 = a_1/(n-1),
///   a_{k+1} = min((1 + 1/(n-1)) a_k, sqrt(n(n + sigma*A_k))/(2R')).
/// Starts at k = 0; each `next()` produces the following step.
class VrSchedule {
 public:
  VrSchedule(std::size_t n, double sigma, double rprime);

  double next();

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  double a() const noexcept { return a_; }
  double a_prev() const noexcept { return a_prev_; }
  double A() const noexcept { return A_; }
  /// Which rule produced the current a_k.
  VrBranch branch() const noexcept { return branch_; }

  /// 1/(2R'), the pre-scaling initial step.
  double initial_step() const noexcept { return 0.5 / rprime_; }

  /// The two candidates of the min for the step after the current one.
  double geometric_candidate() const noexcept;
  double cap_candidate() const noexcept;

 private:
  std::size_t n_;
  double sigma_, rprime_;
  double growth_;  // 1 + 1/(n-1)
  std::size_t k_ = 0;
  double a_ = 0.0, a_prev_ = 0.0, A_ = 0.0;
  VrBranch branch_ = VrBranch::none;
};

struct RegimeConstants {
  double B = 0.0;      ///< B_{n,sigma,R'}
  std::size_t k0 = 0;  ///< end of the geometric phase
  std::size_t K0 = 0;  ///< start of guaranteed linear growth
};

/// B = s + sqrt(s^2 + n^2) with s = sigma*n*(n-1)/(4R'),
/// k0 = ceil(log B / log(n/(n-1))), K0 = ceil(log n / log(n/(n-1))).
RegimeConstants regime_constants(std::size_t n, double sigma, double rprime);

/// Lower bound on A_k of the randomized schedule: the max of the geometric
/// (k <= k0), quadratic (k >= k0) and linear (k >= K0) regime bounds, or 0 if
/// none applies.
double lower_bound_Ak(std::size_t n, double sigma, double rprime, std::size_t k,
                      std::size_t k0, std::size_t K0);

}  // namespace saddlevr
