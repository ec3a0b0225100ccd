#include <charconv>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "saddlevr/runner.hpp"
#include "saddlevr/schedule.hpp"

namespace {

struct ScheduleArgs {
  std::string algo = "vrpda2";
  std::size_t n = 10;
  double sigma = 0.0;
  double gamma = 0.0;
  double lipschitz = 1.0;
  std::size_t iters = 100;
};

// Shortest form that round-trips, as in the trace CSV.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void dump_schedule(const ScheduleArgs& a, std::ostream& out) {
  out << "k,a_k,A_k,regime\n";
  if (a.algo == "pda2") {
    saddlevr::Pda2Schedule s(a.sigma, a.gamma, a.lipschitz);
    for (std::size_t k = 1; k <= a.iters; ++k) {
      s.next();
      out << s.k() << ',' << shortest(s.a()) << ',' << shortest(s.A()) << ",pda2\n";
    }
    return;
  }
  if (a.algo != "vrpda2") throw std::invalid_argument("unknown algorithm '" + a.algo + "'");
  saddlevr::VrSchedule s(a.n, a.sigma, a.lipschitz);
  for (std::size_t k = 1; k <= a.iters; ++k) {
    s.next();
    out << s.k() << ',' << shortest(s.a()) << ',' << shortest(s.A()) << ',' << saddlevr::to_string(s.branch())
        << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual accelerated dual averaging solvers and benchmark runner",
               "saddlevr"};
  app.require_subcommand(1);

  saddlevr::RunConfig cfg;
  std::string problem = "svm-elasticnet", algo = "vrpda2";
  std::optional<double> lipschitz, fstar, delta;
  auto* run = app.add_subcommand("run", "Run a solver and write a convergence trace as CSV");
  run->add_option("--data", cfg.data_path, "LIBSVM dataset (optionally gzip-compressed)")->required();
  run->add_option("--problem", problem, "svm-elasticnet | lad | box-game")
      ->check(CLI::IsMember({"svm-elasticnet", "lad", "box-game"}));
  run->add_option("--algo", algo, "vrpda2 | pda2")->check(CLI::IsMember({"vrpda2", "pda2"}));
  run->add_option("--lambda", cfg.lambda, "l1 weight")->capture_default_str();
  run->add_option("--sigma", cfg.sigma, "l2 weight (strong convexity of l)")->capture_default_str();
  run->add_option("--lipschitz", lipschitz, "Step-size constant: R for pda2, R' for vrpda2");
  run->add_option("--passes", cfg.passes, "Passes over the data")->capture_default_str();
  run->add_option("--seed", cfg.seed, "RNG seed")->required();
  run->add_option("--eval-every", cfg.eval_every, "Evaluation period in passes")->capture_default_str();
  run->add_option("--out", cfg.out_path, "Output CSV ('-' for stdout)")->capture_default_str();
  run->add_option("--fstar", fstar, "Known optimal value for the gap columns");
  run->add_option("--delta", delta, "Offset in f* = f_min - delta");
  run->add_flag("--estimate-fstar", cfg.estimate_fstar, "Estimate f* with a 30x longer run");
  run->add_option("--n-cols", cfg.n_cols, "Minimum feature count");

  ScheduleArgs sched;
  auto* sc = app.add_subcommand("schedule", "Print a step-size schedule as CSV");
  sc->add_option("--algo", sched.algo, "vrpda2 | pda2")->capture_default_str();
  sc->add_option("--n", sched.n, "Number of rows (vrpda2)")->capture_default_str();
  sc->add_option("--sigma", sched.sigma)->capture_default_str();
  sc->add_option("--gamma", sched.gamma, "pda2 only")->capture_default_str();
  sc->add_option("--lipschitz", sched.lipschitz, "R (pda2) or R' (vrpda2)")->capture_default_str();
  sc->add_option("--iters", sched.iters)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // help or version exit 0, usage errors 2
  }

  try {
    if (*sc) {
      dump_schedule(sched, std::cout);
      return 0;
    }
    cfg.problem = saddlevr::parse_problem_kind(problem);
    cfg.algo = saddlevr::parse_algo(algo);
    cfg.lipschitz = lipschitz;
    cfg.fstar = fstar;
    cfg.delta = delta;
    if (cfg.out_path == "-") {
      saddlevr::run_experiment(cfg, std::cout, std::cerr);
      std::cout.flush();
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + cfg.out_path + "'");
      try {
        saddlevr::run_experiment(cfg, out, std::cerr);
      } catch (...) {
        out.flush();
        throw;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
