#include <doctest.h>

#include <random>

#include "saddlevr/refsolver.hpp"
#include "saddlevr/vrpda2.hpp"
#include "support.hpp"

using namespace saddlevr;

namespace {

SaddleProblem random_erm(std::mt19937_64& rng, std::size_t n, std::size_t d, bool lad, double lambda,
                         double sigma) {
  LabeledDataset data{SparseRowMatrix::from_dense(testing::random_dense(rng, n, d, 0.2)), {}};
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < n; ++i) data.labels.push_back(lad ? u(rng) : (u(rng) < 0 ? -1.0 : 1.0));
  return lad ? make_lad_problem(data, lambda, sigma) : make_svm_problem(data, lambda, sigma);
}

double max_deviation(const SaddleProblem& p, const Eigen::VectorXd& x0, const Eigen::VectorXd& y0,
                     std::size_t K, std::uint64_t seed) {
  const auto ref = ref_run(p, x0, y0, K, seed);
  Vrpda2Options opts;
  opts.verify_every = 1;
  Vrpda2Solver s(p, x0, y0, seed, opts);
  double dev = std::max((s.x() - ref.x[0]).lpNorm<Eigen::Infinity>(),
                        (s.y() - ref.y[0]).lpNorm<Eigen::Infinity>());
  for (std::size_t k = 2; k <= K; ++k) {
    s.step();
    REQUIRE(s.last_index() == ref.j[k - 1]);
    dev = std::max({dev, (s.x() - ref.x[k - 1]).lpNorm<Eigen::Infinity>(),
                    (s.y() - ref.y[k - 1]).lpNorm<Eigen::Infinity>(), std::abs(s.A() - ref.A[k - 1]) / s.A()});
  }
  return dev;
}

}  // namespace

TEST_SUITE("vrpda2") {
  TEST_CASE("initialization constants for n = 2") {
    Eigen::MatrixXd rows(2, 1);
    rows << 1, 1;
    const auto p = make_box_game(testing::shared(rows));
    Vrpda2Solver s(p, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 0);
    CHECK(s.schedule().initial_step() == 0.5);
    CHECK(s.k() == 1);
    CHECK(s.a() == 1.0);
    CHECK(s.A() == 1.0);
    CHECK(s.schedule().a() == 1.0);
    CHECK(s.schedule().A() == 2.0);
  }

  TEST_CASE("hinge initialization from the origin") {
    std::mt19937_64 rng(1);
    const auto p = random_erm(rng, 6, 3, false, 0.1, 0.0);
    Vrpda2Solver s(p, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(6), 0);
    const double at1 = 0.5 / p.R_prime();
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(s.y()[i] == doctest::Approx(-at1 / 6).epsilon(1e-15));
    CHECK(s.z_drift() == 0.0);
    CHECK(s.r() == Eigen::VectorXd::Constant(6, 6 * at1 / 6));
  }

  TEST_CASE("tiny instance matches the reference") {
    Eigen::MatrixXd rows(2, 1);
    rows << 1, 1;
    LabeledDataset data{SparseRowMatrix::from_dense(rows), {1.0, 1.0}};
    const auto p = make_svm_problem(data, 0.0, 0.0);
    CHECK(max_deviation(p, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 4, 5) <= 1e-12);
  }

  TEST_CASE("K = 1 equals initialization") {
    std::mt19937_64 rng(3);
    const auto p = random_erm(rng, 5, 4, true, 0.05, 0.1);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4), y0 = Eigen::VectorXd::Zero(5);
    const auto ref = ref_run(p, x0, y0, 1, 9);
    Vrpda2Solver s(p, x0, y0, 9);
    CHECK((ref.x[0] - s.x()).norm() <= 1e-15);
    CHECK((ref.y[0] - s.y()).norm() <= 1e-15);
    const auto res = vrpda2_run(p, x0, y0, 1, 9);
    CHECK(res.x_avg == s.x());
    CHECK(res.y_avg == s.y());
  }

  TEST_CASE("oracle equivalence on random instances") {
    std::mt19937_64 rng(2024);
    int t = 0;
    for (std::size_t n : {4u, 8u, 16u}) {
      for (std::size_t d : {2u, 5u, 8u}) {
        for (double sigma : {0.0, 0.1}) {
          const bool lad = (t++ % 2) == 1;
          const auto p = random_erm(rng, n, d, lad, 0.05, sigma);
          const Eigen::VectorXd x0 = testing::uniform_vector(rng, static_cast<Eigen::Index>(d), -0.5, 0.5);
          Eigen::VectorXd y0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
          CHECK(max_deviation(p, x0, y0, 200, 7 + static_cast<std::uint64_t>(t)) <= 1e-9);
        }
      }
    }
  }

  TEST_CASE("single coordinate updates and incremental bookkeeping") {
    std::mt19937_64 rng(5);
    const auto p = random_erm(rng, 12, 6, false, 0.01, 0.0);
    Vrpda2Options opts;
    opts.verify_every = 1;
    Vrpda2Solver s(p, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(12), 17, opts);
    double r_sum = s.r().sum();
    int idle = 0;
    for (int k = 0; k < 2000; ++k) {
      const Eigen::VectorXd y = s.y(), z = s.z(), q = s.q();
      s.step();
      const Eigen::Index changed = (s.y().array() != y.array()).count();
      CHECK(changed <= 1);
      r_sum += s.a();
      CHECK(s.r().sum() == doctest::Approx(r_sum).epsilon(1e-12));
      CHECK((s.r().array() >= 0).all());
      CHECK(s.z_drift() <= 1e-10 * (1 + s.y().norm()));
      if (changed == 0) {
        ++idle;
        CHECK(s.z() == z);
        CHECK((s.q() - (q + s.a() * z)).norm() <= 1e-12 * (1 + q.norm()));
      }
    }
    CHECK(idle > 0);
  }

  TEST_CASE("lazy dual average matches the explicit weights") {
    std::mt19937_64 rng(8);
    for (double sigma : {0.0, 0.5}) {
      const auto p = random_erm(rng, 9, 4, true, 0.02, sigma);
      const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4), y0 = Eigen::VectorXd::Zero(9);
      const std::size_t K = 300;
      const auto ref = ref_run(p, x0, y0, K + 1, 4);
      Vrpda2Solver s(p, x0, y0, 4);
      const double n = 9;
      for (std::size_t k = 2; k <= K; ++k) {
        s.step();
        if (k % 37 != 0 && k != 2 && k != K) continue;
        // ref.a[t] is a_{t+1}; the weight of y_i needs a_{i+1}
        Eigen::VectorXd sum = n * ref.a[k - 1] * ref.y[k - 1];
        Eigen::VectorXd xs = Eigen::VectorXd::Zero(4);
        for (std::size_t i = 2; i <= k - 1; ++i) sum += (n * ref.a[i - 1] - (n - 1) * ref.a[i]) * ref.y[i - 1];
        for (std::size_t i = 1; i <= k; ++i) xs += ref.a[i - 1] * ref.x[i - 1];
        CHECK((s.y_avg() - sum / ref.A[k - 1]).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK((s.x_avg() - xs / ref.A[k - 1]).lpNorm<Eigen::Infinity>() <= 1e-10);
      }
    }
  }

  TEST_CASE("n = 2 weights are all one") {
    Eigen::MatrixXd rows(2, 2);
    rows << 1, 0, 0, 1;
    const auto p = make_box_game(testing::shared(rows));
    const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(2), y0 = Eigen::VectorXd::Ones(2);
    const auto ref = ref_run(p, x0, y0, 20, 1);
    Vrpda2Solver s(p, x0, y0, 1);
    while (s.k() < 20) s.step();
    CHECK(s.A() == 20.0);
    Eigen::VectorXd sum = 2 * ref.y[19];
    for (int i = 2; i <= 19; ++i) sum += ref.y[static_cast<std::size_t>(i - 1)];
    CHECK((s.y_avg() - sum / 20).norm() <= 1e-14);
  }

  TEST_CASE("deterministic given the seed") {
    std::mt19937_64 rng(6);
    const auto p = random_erm(rng, 10, 5, false, 0.01, 0.0);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(5), y0 = Eigen::VectorXd::Zero(10);
    const auto a = vrpda2_run(p, x0, y0, 500, 3);
    const auto b = vrpda2_run(p, x0, y0, 500, 3);
    const auto c = vrpda2_run(p, x0, y0, 500, 4);
    CHECK(a.x == b.x);
    CHECK(a.y_avg == b.y_avg);
    CHECK(a.x != c.x);
  }

  TEST_CASE("expected gap and distance bounds on a box game") {
    std::mt19937_64 rng(10);
    const std::size_t n = 6, d = 3;
    const Eigen::MatrixXd rows = testing::random_dense(rng, n, d);
    for (double sigma : {0.0, 0.5}) {
      const auto p = make_box_game(testing::shared(rows), sigma);
      const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(d), y0 = Eigen::VectorXd::Ones(n);
      const double D = p.primal_diameter_sq() + p.dual_diameter_sq();
      const double r0 = x0.squaredNorm() + y0.squaredNorm();
      const std::size_t K = 300;
      std::vector<double> gap(K + 1, 0.0), dist(K + 1, 0.0), A(K + 1, 0.0);
      const int seeds = 60;
      for (int sd = 0; sd < seeds; ++sd) {
        Vrpda2Solver s(p, x0, y0, static_cast<std::uint64_t>(sd));
        while (s.k() < K) {
          s.step();
          gap[s.k()] += sup_gap_box_game(p, s.x_avg(), s.y_avg()) / seeds;
          dist[s.k()] += (0.25 * n * s.y().squaredNorm() + 0.5 * (n + sigma * s.A()) * s.x().squaredNorm()) / seeds;
          A[s.k()] = s.A();
        }
      }
      for (std::size_t k = 2; k <= K; ++k) {
        CHECK(gap[k] <= n * D / (2 * A[k]));
        CHECK(dist[k] <= 0.5 * n * r0);
      }
    }
  }

  TEST_CASE("rejects unsupported setups") {
    Eigen::MatrixXd rows(2, 1);
    rows << 1, 1;
    const auto strongly = make_box_game(testing::shared(rows), 0.0, 0.1);
    CHECK_THROWS_AS(Vrpda2Solver(strongly, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 0),
                    std::invalid_argument);
    Eigen::MatrixXd single(1, 1);
    single << 1;
    const auto tiny = make_box_game(testing::shared(single));
    CHECK_THROWS(Vrpda2Solver(tiny, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 0));
    const auto p = make_box_game(testing::shared(rows));
    CHECK_THROWS_AS(Vrpda2Solver(p, Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Zero(2), 0),
                    std::domain_error);
  }

  TEST_CASE("reference and solver share the index stream") {
    IndexSampler a(77, 13), b(77, 13);
    for (int t = 0; t < 1000; ++t) CHECK(a() == b());
    IndexSampler c(5, 3);
    std::vector<int> counts(3, 0);
    for (int t = 0; t < 30000; ++t) ++counts[c()];
    for (int v : counts) CHECK(std::abs(v - 10000) < 500);
  }
}
