#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddlevr/dataio.hpp"
#include "saddlevr/saddle.hpp"

namespace saddlevr {

enum class ProblemKind { svm_elasticnet, lad, box_game };
enum class Algo { vrpda2, pda2 };

ProblemKind parse_problem_kind(std::string_view name);
Algo parse_algo(std::string_view name);
std::string_view to_string(ProblemKind k) noexcept;
std::string_view to_string(Algo a) noexcept;

struct RunConfig {
  std::string data_path;
  ProblemKind problem = ProblemKind::svm_elasticnet;
  Algo algo = Algo::vrpda2;
  double lambda = 1e-4;
  double sigma = 0.0;
  /// R for pda2, R' for vrpda2; defaults to the max row norm.
  std::optional<double> lipschitz;
  std::size_t passes = 50;
  std::uint64_t seed = 0;
  /// Evaluation period in passes.
  double eval_every = 0.25;
  std::string out_path = "-";
  std::optional<double> fstar;
  std::optional<double> delta;
  bool estimate_fstar = false;
  /// Lower bound on the feature count (LIBSVM files carry no header).
  std::size_t n_cols = 0;
};

/// Throws std::invalid_argument describing the first bad field.
void validate(const RunConfig& cfg);

struct TraceRecord {
  double pass = 0.0;
  std::size_t iter = 0;
  double f_last = 0.0, f_avg = 0.0;
  /// f - f~* for ERM problems (NaN while f~* is unknown); exact primal-dual
  /// gap for box games.
  double gap_last = 0.0, gap_avg = 0.0;
  std::size_t nnz_last = 0, nnz_avg = 0;
  /// Cumulative solver time, evaluation excluded.
  double wall_ms = 0.0;
};

inline constexpr std::string_view kCsvHeader =
    "pass,iter,f_last,f_avg,gap_last,gap_avg,nnz_last,nnz_avg,wall_ms";
inline constexpr double kNnzThreshold = 1e-7;

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const TraceRecord& r);

/// Reads a LIBSVM file, gzip-compressed or plain.
LabeledDataset load_dataset(const std::string& path, std::size_t min_cols = 0);

/// Normalizes the rows and builds the configured saddle problem. Box games
/// ignore the labels and use l = indicator([-1,1]^d) + sigma/2|x|^2.
SaddleProblem build_problem(const RunConfig& cfg, const LabeledDataset& data,
                            std::size_t* zero_rows = nullptr);

/// 1e-8 for sigma >= 1e-4, 1e-13 otherwise.
double default_delta(double sigma) noexcept;

/// Iterations per pass: n for vrpda2, 1 for pda2.
std::size_t iterations_per_pass(const RunConfig& cfg, std::size_t n) noexcept;

/// Runs the configured solver for cfg.passes passes, from (0, 0) for ERM
/// problems and from the all-ones corner for box games. Records
/// one row every cfg.eval_every passes (at least every iteration) plus the
/// final iterate. `sink` sees each row as soon as it is computed.
std::vector<TraceRecord> run_trace(const SaddleProblem& problem, const RunConfig& cfg,
                                   const std::function<void(const TraceRecord&)>& sink = {});

/// Runs 30x the configured number of passes and returns the smallest primal
/// value seen over last and average iterates, minus delta.
struct FstarEstimate {
  double f_min = 0.0;
  double delta = 0.0;
  double fstar = 0.0;
};
FstarEstimate estimate_fstar(const SaddleProblem& problem, const RunConfig& cfg);

/// SADDLEVR_THREADS if set (>= 1), else the hardware concurrency.
std::size_t worker_threads();

/// Loads data, builds the problem, optionally estimates f~* (concurrently with
/// the main run when more than one worker is allowed) and writes the CSV to
/// `out`. Diagnostics go to `log`. Throws on failure.
void run_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace saddlevr
