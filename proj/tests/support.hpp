#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "saddlevr/dataio.hpp"
#include "saddlevr/saddle.hpp"

namespace testing {

/// Dense random matrix with entries uniform on [-1, 1]; each entry is zeroed
/// with probability `sparsity`.
inline Eigen::MatrixXd random_dense(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                    double sparsity = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = coin(rng) < sparsity ? 0.0 : u(rng);
  }
  return m;
}

inline std::shared_ptr<const saddlevr::SparseRowMatrix> shared(const Eigen::MatrixXd& m) {
  return std::make_shared<const saddlevr::SparseRowMatrix>(saddlevr::SparseRowMatrix::from_dense(m));
}

inline Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index size, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = u(rng);
  return v;
}

/// argmin over a uniform grid of step h on [lo, hi] of f.
template <class F>
inline double grid_argmin(const F& f, double lo, double hi, double h) {
  const auto steps = static_cast<long long>(std::floor((hi - lo) / h + 1e-9));
  double best_x = lo, best = f(lo);
  for (long long t = 1; t <= steps; ++t) {
    const double x = lo + static_cast<double>(t) * h;
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  if (const double v = f(hi); v < best) best_x = hi;
  return best_x;
}

}  // namespace testing
