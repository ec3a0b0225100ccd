#include <doctest.h>

#include <cmath>
#include <sstream>

#include "saddlevr/runner.hpp"
#include "saddlevr/schedule.hpp"

using namespace saddlevr;

namespace {

const std::string kTiny = std::string(SADDLEVR_SOURCE_DIR) + "/tests/data/tiny.libsvm";
const std::string kA9a = std::string(SADDLEVR_SOURCE_DIR) + "/data/a9a-adult.txt.gz";

RunConfig tiny_config() {
  RunConfig c;
  c.data_path = kTiny;
  c.passes = 6;
  c.sigma = 1e-4;
  c.seed = 1;
  return c;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("names") {
    CHECK(parse_problem_kind("svm-elasticnet") == ProblemKind::svm_elasticnet);
    CHECK(parse_problem_kind("lad") == ProblemKind::lad);
    CHECK(parse_problem_kind("box-game") == ProblemKind::box_game);
    CHECK(parse_algo("pda2") == Algo::pda2);
    CHECK_THROWS(parse_algo("spdhg"));
    CHECK(to_string(ProblemKind::box_game) == "box-game");
  }

  TEST_CASE("csv format") {
    std::ostringstream out;
    write_csv_header(out);
    TraceRecord r;
    r.pass = 0.25;
    r.iter = 12;
    r.f_last = 0.1;
    r.f_avg = 1.0 / 3.0;
    r.gap_last = std::nan("");
    r.gap_avg = 1e-13;
    r.nnz_last = 3;
    r.nnz_avg = 7;
    r.wall_ms = 1.5;
    write_csv_row(out, r);
    CHECK(out.str() ==
          "pass,iter,f_last,f_avg,gap_last,gap_avg,nnz_last,nnz_avg,wall_ms\n"
          "0.25,12,0.1,0.3333333333333333,nan,1e-13,3,7,1.5\n");
  }

  TEST_CASE("delta mapping and f* arithmetic") {
    CHECK(default_delta(1e-4) == 1e-8);
    CHECK(default_delta(1.0) == 1e-8);
    CHECK(default_delta(1e-8) == 1e-13);
    CHECK(default_delta(0.0) == 1e-13);
    CHECK(0.5 - default_delta(1e-4) == doctest::Approx(0.49999999).epsilon(1e-15));
  }

  TEST_CASE("validation") {
    RunConfig c = tiny_config();
    CHECK_NOTHROW(validate(c));
    c.passes = 0;
    CHECK_THROWS(validate(c));
    c = tiny_config();
    c.lambda = -1;
    CHECK_THROWS(validate(c));
    c = tiny_config();
    c.eval_every = 0;
    CHECK_THROWS(validate(c));
    c = tiny_config();
    c.lipschitz = 0.0;
    CHECK_THROWS(validate(c));
  }

  TEST_CASE("loads plain and gzip files") {
    const auto tiny = load_dataset(kTiny);
    CHECK(tiny.matrix.rows() == 8);
    CHECK(tiny.matrix.cols() == 6);
    CHECK(load_dataset(kTiny, 10).matrix.cols() == 10);
    const auto a9a = load_dataset(kA9a);
    CHECK(a9a.matrix.rows() == 32561);
    CHECK(a9a.matrix.cols() == 123);
    CHECK_THROWS(load_dataset("/nonexistent/data.txt"));
  }

  TEST_CASE("trace layout and determinism") {
    const RunConfig c = tiny_config();
    const auto data = load_dataset(c.data_path);
    const auto p = build_problem(c, data);
    CHECK(p.R_prime() == doctest::Approx(1.0).epsilon(1e-12));
    const auto t1 = run_trace(p, c), t2 = run_trace(p, c);
    REQUIRE(t1.size() == 24);
    for (std::size_t i = 0; i < t1.size(); ++i) {
      CHECK(t1[i].iter == 2 * (i + 1));
      CHECK(t1[i].pass == doctest::Approx(static_cast<double>(t1[i].iter) / 8));
      CHECK(std::isnan(t1[i].gap_avg));
      CHECK(t1[i].f_last == t2[i].f_last);
      CHECK(t1[i].f_avg == t2[i].f_avg);
      if (i > 0) CHECK(t1[i].wall_ms >= t1[i - 1].wall_ms);
    }
    RunConfig pd = c;
    pd.algo = Algo::pda2;
    const auto t3 = run_trace(p, pd);
    REQUIRE(t3.size() == 6);
    CHECK(t3.back().iter == 6);
    CHECK(t3.back().pass == 6.0);
  }

  TEST_CASE("f* estimate uses the long run") {
    const RunConfig c = tiny_config();
    const auto data = load_dataset(c.data_path);
    const auto p = build_problem(c, data);
    const auto e = estimate_fstar(p, c);
    RunConfig long_cfg = c;
    long_cfg.passes *= 30;
    double f_min = 1e300;
    for (const auto& r : run_trace(p, long_cfg)) f_min = std::min({f_min, r.f_last, r.f_avg});
    CHECK(e.f_min == f_min);
    CHECK(e.delta == 1e-8);
    CHECK(e.fstar == f_min - 1e-8);
    RunConfig zero = c;
    zero.delta = 0.0;
    CHECK(estimate_fstar(p, zero).fstar == f_min);
  }

  TEST_CASE("box game traces certify the deterministic bound") {
    RunConfig c = tiny_config();
    c.problem = ProblemKind::box_game;
    c.algo = Algo::pda2;
    c.sigma = 0.0;
    c.passes = 200;
    c.eval_every = 1;
    const auto data = load_dataset(c.data_path);
    const auto p = build_problem(c, data);
    const double D = p.primal_diameter_sq() + p.dual_diameter_sq();
    Pda2Schedule s(0, 0, p.R());
    for (const auto& r : run_trace(p, c)) {
      s.next();
      CHECK(r.iter == s.k());
      CHECK(r.gap_avg * 2 * s.A() <= D);
      CHECK(r.gap_last >= 0.0);
    }
  }

  TEST_CASE("experiment output with f* estimation") {
    RunConfig c = tiny_config();
    c.estimate_fstar = true;
    std::ostringstream out, log;
    run_experiment(c, out, log);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.find("nan") == std::string::npos);
    }
    CHECK(rows == 24);
    CHECK(log.str().find("fstar=") != std::string::npos);
  }
}
