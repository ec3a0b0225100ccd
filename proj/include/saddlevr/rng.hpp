#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace saddlevr {

/// Uniform index stream on {0, ..., n-1} from a std::mt19937_64 seeded with
/// `seed`. Each draw takes raw 64-bit words r and rejects r < (2^64 mod n),
/// returning r mod n, so there is no modulo bias. Both the solver and its
/// reference oracle build their streams through this class.
class IndexSampler {
 public:
  IndexSampler(std::uint64_t seed, std::size_t n) : engine_(seed), n_(n) {
    if (n == 0) throw std::invalid_argument("IndexSampler: n must be positive");
    threshold_ = (0 - n_) % n_;
  }

  std::size_t operator()() {
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold_) return static_cast<std::size_t>(r % n_);
    }
  }

  std::size_t n() const noexcept { return n_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t n_;
  std::uint64_t threshold_;
};

}  // namespace saddlevr
