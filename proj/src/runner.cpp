#include "saddlevr/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <zlib.h>

#include "saddlevr/pda2.hpp"
#include "saddlevr/vrpda2.hpp"

namespace saddlevr {

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "svm-elasticnet") return ProblemKind::svm_elasticnet;
  if (name == "lad") return ProblemKind::lad;
  if (name == "box-game") return ProblemKind::box_game;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

Algo parse_algo(std::string_view name) {
  if (name == "vrpda2") return Algo::vrpda2;
  if (name == "pda2") return Algo::pda2;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(ProblemKind k) noexcept {
  switch (k) {
    case ProblemKind::lad: return "lad";
    case ProblemKind::box_game: return "box-game";
    default: return "svm-elasticnet";
  }
}

std::string_view to_string(Algo a) noexcept { return a == Algo::pda2 ? "pda2" : "vrpda2"; }

void validate(const RunConfig& cfg) {
  auto nonneg = [](double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  };
  if (cfg.data_path.empty()) throw std::invalid_argument("a dataset path is required");
  nonneg(cfg.lambda, "lambda");
  nonneg(cfg.sigma, "sigma");
  if (cfg.lipschitz && (!std::isfinite(*cfg.lipschitz) || *cfg.lipschitz <= 0.0)) {
    throw std::invalid_argument("lipschitz must be positive");
  }
  if (cfg.passes == 0) throw std::invalid_argument("passes must be positive");
  if (!std::isfinite(cfg.eval_every) || cfg.eval_every <= 0.0) {
    throw std::invalid_argument("eval-every must be positive");
  }
  if (cfg.delta) nonneg(*cfg.delta, "delta");
  if (cfg.fstar && !std::isfinite(*cfg.fstar)) throw std::invalid_argument("fstar must be finite");
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

void put_number(std::ostream& out, std::size_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const TraceRecord& r) {
  put_number(out, r.pass);
  out << ',';
  put_number(out, r.iter);
  for (double v : {r.f_last, r.f_avg, r.gap_last, r.gap_avg}) {
    out << ',';
    put_number(out, v);
  }
  out << ',';
  put_number(out, r.nnz_last);
  out << ',';
  put_number(out, r.nnz_avg);
  out << ',';
  put_number(out, r.wall_ms);
  out << '\n';
}

LabeledDataset load_dataset(const std::string& path, std::size_t min_cols) {
  std::unique_ptr<gzFile_s, int (*)(gzFile)> f(gzopen(path.c_str(), "rb"), gzclose);
  if (!f) throw std::runtime_error("cannot open dataset '" + path + "'");
  gzbuffer(f.get(), 1 << 17);
  std::string text;
  char buf[1 << 16];
  for (;;) {
    const int got = gzread(f.get(), buf, sizeof buf);
    if (got < 0) {
      int code = 0;
      throw std::runtime_error("error reading '" + path + "': " + gzerror(f.get(), &code));
    }
    if (got == 0) break;
    text.append(buf, static_cast<std::size_t>(got));
  }
  std::istringstream in(std::move(text));
  return parse_libsvm(in, min_cols);
}

SaddleProblem build_problem(const RunConfig& cfg, const LabeledDataset& data,
                            std::size_t* zero_rows) {
  NormalizedRows norm = normalize_rows(data.matrix);
  if (zero_rows) *zero_rows = norm.zero_rows;
  LabeledDataset unit{std::move(norm.matrix), data.labels};
  switch (cfg.problem) {
    case ProblemKind::lad: return make_lad_problem(unit, cfg.lambda, cfg.sigma);
    case ProblemKind::box_game:
      return make_box_game(std::make_shared<const SparseRowMatrix>(std::move(unit.matrix)), cfg.sigma);
    default: return make_svm_problem(unit, cfg.lambda, cfg.sigma);
  }
}

double default_delta(double sigma) noexcept { return sigma >= 1e-4 ? 1e-8 : 1e-13; }

std::size_t iterations_per_pass(const RunConfig& cfg, std::size_t n) noexcept {
  return cfg.algo == Algo::vrpda2 ? n : 1;
}

std::vector<TraceRecord> run_trace(const SaddleProblem& problem, const RunConfig& cfg,
                                   const std::function<void(const TraceRecord&)>& sink) {
  using clock = std::chrono::steady_clock;
  const std::size_t per_pass = iterations_per_pass(cfg, problem.n());
  const std::size_t K = cfg.passes * per_pass;
  const auto period = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.eval_every * static_cast<double>(per_pass))));
  const bool box = cfg.problem == ProblemKind::box_game;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // (0, 0) is the saddle point of every box game, so those start at the all-ones corner.
  const double start = box ? 1.0 : 0.0;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(problem.d()), start);
  const Eigen::VectorXd y0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(problem.n()), start);

  std::vector<TraceRecord> trace;
  double solver_ms = 0.0;
  auto record = [&](std::size_t k, const Eigen::VectorXd& x, const Eigen::VectorXd& x_avg,
                    const Eigen::VectorXd* y, const Eigen::VectorXd* y_avg) {
    TraceRecord r;
    r.iter = k;
    r.pass = static_cast<double>(k) / static_cast<double>(per_pass);
    r.f_last = primal_value(problem, x);
    r.f_avg = primal_value(problem, x_avg);
    if (box) {
      r.gap_last = sup_gap_box_game(problem, x, *y);
      r.gap_avg = sup_gap_box_game(problem, x_avg, *y_avg);
    } else if (cfg.fstar) {
      r.gap_last = r.f_last - *cfg.fstar;
      r.gap_avg = r.f_avg - *cfg.fstar;
    } else {
      r.gap_last = r.gap_avg = nan;
    }
    r.nnz_last = count_nnz(x, kNnzThreshold);
    r.nnz_avg = count_nnz(x_avg, kNnzThreshold);
    r.wall_ms = solver_ms;
    trace.push_back(r);
    if (sink) sink(r);
  };

  auto t0 = clock::now();
  auto lap = [&] {
    const auto t = clock::now();
    solver_ms += std::chrono::duration<double, std::milli>(t - t0).count();
  };

  if (cfg.algo == Algo::vrpda2) {
    Vrpda2Options opts;
    opts.lipschitz = cfg.lipschitz;
    Vrpda2Solver s(problem, x0, y0, cfg.seed, opts);
    auto eval = [&] {
      lap();
      const Eigen::VectorXd xa = s.x_avg();
      if (box) {
        const Eigen::VectorXd y = s.y(), ya = s.y_avg();
        record(s.k(), s.x(), xa, &y, &ya);
      } else {
        record(s.k(), s.x(), xa, nullptr, nullptr);
      }
      t0 = clock::now();
    };
    if (period == 1) eval();
    while (s.k() < K) {
      s.step();
      if (s.k() % period == 0 || s.k() == K) eval();
    }
  } else {
    Pda2Solver s(problem, x0, y0, cfg.lipschitz);
    while (s.k() < K) {
      s.step();
      if (s.k() % period == 0 || s.k() == K) {
        lap();
        const Eigen::VectorXd xa = s.x_avg(), ya = s.y_avg();
        record(s.k(), s.x(), xa, &s.y(), &ya);
        t0 = clock::now();
      }
    }
  }
  return trace;
}

FstarEstimate estimate_fstar(const SaddleProblem& problem, const RunConfig& cfg) {
  RunConfig long_cfg = cfg;
  long_cfg.passes = cfg.passes * 30;
  long_cfg.fstar.reset();
  double f_min = std::numeric_limits<double>::infinity();
  run_trace(problem, long_cfg, [&](const TraceRecord& r) {
    f_min = std::min({f_min, r.f_last, r.f_avg});
  });
  FstarEstimate e;
  e.f_min = f_min;
  e.delta = cfg.delta.value_or(default_delta(cfg.sigma));
  e.fstar = f_min - e.delta;
  return e;
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("SADDLEVR_THREADS")) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate(cfg);
  const LabeledDataset data = load_dataset(cfg.data_path, cfg.n_cols);
  std::size_t zero_rows = 0;
  const SaddleProblem problem = build_problem(cfg, data, &zero_rows);
  log << "loaded " << cfg.data_path << ": n=" << problem.n() << " d=" << problem.d()
      << " nnz=" << problem.matrix().nnz() << '\n';
  if (zero_rows != 0) log << "warning: " << zero_rows << " all-zero rows left unnormalized\n";

  const bool estimate = cfg.estimate_fstar && !cfg.fstar && cfg.problem != ProblemKind::box_game;
  if (cfg.estimate_fstar && cfg.problem == ProblemKind::box_game) {
    log << "box-game gaps are exact; skipping f* estimation\n";
  }
  auto report = [&](const FstarEstimate& e) {
    log << "f_min=" << e.f_min << " delta=" << e.delta << " fstar=" << e.fstar << '\n';
    if (e.delta == 0.0) log << "warning: delta = 0, the gap can reach exactly 0\n";
  };

  write_csv_header(out);
  if (!estimate) {
    run_trace(problem, cfg, [&](const TraceRecord& r) { write_csv_row(out, r); });
    return;
  }

  if (worker_threads() >= 2) {
    auto fut = std::async(std::launch::async, [&] { return estimate_fstar(problem, cfg); });
    std::vector<TraceRecord> trace = run_trace(problem, cfg);
    const FstarEstimate e = fut.get();
    report(e);
    for (auto& r : trace) {
      r.gap_last = r.f_last - e.fstar;
      r.gap_avg = r.f_avg - e.fstar;
      write_csv_row(out, r);
    }
  } else {
    const FstarEstimate e = estimate_fstar(problem, cfg);
    report(e);
    RunConfig with_fstar = cfg;
    with_fstar.fstar = e.fstar;
    run_trace(problem, with_fstar, [&](const TraceRecord& r) { write_csv_row(out, r); });
  }
}

}  // namespace saddlevr
