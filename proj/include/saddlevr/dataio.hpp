#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "saddlevr/huge_alloc.hpp"

namespace saddlevr {

/// Raised for malformed LIBSVM input. `line()` is 1-based, 0 when the error
/// is not tied to a line (empty input).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-owning view of one sparse row.
struct SparseRow {
  std::span<const std::uint32_t> index;
  std::span<const double> value;

  std::size_t nnz() const noexcept { return index.size(); }

  /// Every column present, so index[t] == t and the index array is never read.
  bool dense = false;

  double dot(const Eigen::VectorXd& x) const noexcept {
    double s = 0.0;
    if (dense) {
      for (std::size_t t = 0; t < value.size(); ++t) s += value[t] * x[static_cast<Eigen::Index>(t)];
    } else {
      for (std::size_t t = 0; t < index.size(); ++t) s += value[t] * x[index[t]];
    }
    return s;
  }

  /// out += alpha * row
  void axpy(double alpha, Eigen::VectorXd& out) const noexcept {
    if (dense) {
      for (std::size_t t = 0; t < value.size(); ++t) out[static_cast<Eigen::Index>(t)] += alpha * value[t];
    } else {
      for (std::size_t t = 0; t < index.size(); ++t) out[index[t]] += alpha * value[t];
    }
  }
};

/// Row-major (CSR) sample matrix holding the rows b_i, with cached row norms.
///
/// Immutable after construction; every constructor checks that column indices
/// are strictly increasing within a row and below `cols()`, and that all values
/// are finite.
class SparseRowMatrix {
 public:
  SparseRowMatrix() = default;
  SparseRowMatrix(std::size_t n_cols, std::vector<std::size_t> row_ptr,
                  std::vector<std::uint32_t> col_index, std::vector<double> values);

  /// Dense row-major input, zeros dropped. Mostly for tests and generators.
  static SparseRowMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t rows() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  SparseRow row(std::size_t i) const noexcept {
    const std::size_t b = row_ptr_[i], e = row_ptr_[i + 1];
    return {std::span<const std::uint32_t>(col_index_.data() + b, e - b),
            std::span<const double>(values_.data() + b, e - b), e - b == n_cols_};
  }

  double row_norm(std::size_t i) const noexcept { return row_norms_[i]; }
  std::span<const double> row_norms() const noexcept { return row_norms_; }
  double max_row_norm() const noexcept;

  /// [b_1^T x, ..., b_n^T x] (no 1/n factor).
  Eigen::VectorXd times(const Eigen::VectorXd& x) const;
  /// sum_i y_i b_i (no 1/n factor).
  Eigen::VectorXd transpose_times(const Eigen::VectorXd& y) const;

  Eigen::MatrixXd to_dense() const;

  /// Same rows, column count raised to at least `n_cols`.
  SparseRowMatrix with_min_cols(std::size_t n_cols) const;

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> col_index() const noexcept { return col_index_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const SparseRowMatrix& a, const SparseRowMatrix& b) {
    return a.n_cols_ == b.n_cols_ && a.row_ptr_ == b.row_ptr_ &&
           a.col_index_ == b.col_index_ && a.values_ == b.values_;
  }

 private:
  void validate_and_cache();

  std::size_t n_cols_ = 0;
  huge_vector<std::size_t> row_ptr_{0};
  huge_vector<std::uint32_t> col_index_;
  huge_vector<double> values_;
  std::vector<double> row_norms_;
};

struct LabeledDataset {
  SparseRowMatrix matrix;
  /// One entry per row. Classification sets use +1/-1; regression targets
  /// (LAD) and raw MNIST digits are stored unchanged.
  std::vector<double> labels;
};

/// Parses "label idx:val idx:val ..." lines with 1-based, strictly increasing
/// indices. Blank lines and `#` comments are skipped. The column count is the
/// largest index seen, raised to `min_cols` if that is larger.
LabeledDataset parse_libsvm(std::istream& in, std::size_t min_cols = 0);

/// Writes the dataset back in the same format. Values use shortest round-trip
/// formatting, so parse(write(d)) reproduces d exactly.
void write_libsvm(std::ostream& out, const LabeledDataset& data);

/// Digits 5..9 map to +1, 0..4 to -1.
std::vector<double> remap_mnist_labels(std::span<const int> raw);

struct NormalizedRows {
  SparseRowMatrix matrix;
  std::size_t zero_rows = 0;  ///< rows left untouched because their norm is 0
};

/// Scales every nonzero row to unit Euclidean norm.
NormalizedRows normalize_rows(const SparseRowMatrix& m);

/// Replaces row i by label_i * b_i. Labels must be +1 or -1.
SparseRowMatrix fold_labels(const LabeledDataset& data);

}  // namespace saddlevr
