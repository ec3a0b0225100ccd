#include "saddlevr/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace saddlevr {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

SparseRowMatrix::SparseRowMatrix(std::size_t n_cols, std::vector<std::size_t> row_ptr,
                                 std::vector<std::uint32_t> col_index,
                                 std::vector<double> values)
    : n_cols_(n_cols),
      row_ptr_(row_ptr.begin(), row_ptr.end()),
      col_index_(col_index.begin(), col_index.end()),
      values_(values.begin(), values.end()) {
  validate_and_cache();
}

void SparseRowMatrix::validate_and_cache() {
  if (row_ptr_.empty() || row_ptr_.front() != 0 || row_ptr_.back() != values_.size() ||
      col_index_.size() != values_.size()) {
    throw std::invalid_argument("SparseRowMatrix: inconsistent CSR arrays");
  }
  const std::size_t n = rows();
  row_norms_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) {
      throw std::invalid_argument("SparseRowMatrix: row pointers must be nondecreasing");
    }
    double sq = 0.0;
    for (std::size_t t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t) {
      if (col_index_[t] >= n_cols_) {
        throw std::invalid_argument("SparseRowMatrix: column index out of range in row " +
                                    std::to_string(i));
      }
      if (t > row_ptr_[i] && col_index_[t] <= col_index_[t - 1]) {
        throw std::invalid_argument("SparseRowMatrix: column indices not increasing in row " +
                                    std::to_string(i));
      }
      if (!std::isfinite(values_[t])) {
        throw std::invalid_argument("SparseRowMatrix: non-finite value in row " +
                                    std::to_string(i));
      }
      sq += values_[t] * values_[t];
    }
    row_norms_[i] = std::sqrt(sq);
  }
}

SparseRowMatrix SparseRowMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(j));
        val.push_back(dense(i, j));
      }
    }
    ptr.push_back(val.size());
  }
  return SparseRowMatrix(static_cast<std::size_t>(dense.cols()), std::move(ptr),
                         std::move(idx), std::move(val));
}

double SparseRowMatrix::max_row_norm() const noexcept {
  double m = 0.0;
  for (double r : row_norms_) m = std::max(m, r);
  return m;
}

Eigen::VectorXd SparseRowMatrix::times(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows()));
  for (std::size_t i = 0; i < rows(); ++i) out[static_cast<Eigen::Index>(i)] = row(i).dot(x);
  return out;
}

Eigen::VectorXd SparseRowMatrix::transpose_times(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_cols_));
  for (std::size_t i = 0; i < rows(); ++i) {
    const double yi = y[static_cast<Eigen::Index>(i)];
    if (yi != 0.0) row(i).axpy(yi, out);
  }
  return out;
}

Eigen::MatrixXd SparseRowMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows()),
                                            static_cast<Eigen::Index>(n_cols_));
  for (std::size_t i = 0; i < rows(); ++i) {
    const SparseRow r = row(i);
    for (std::size_t t = 0; t < r.nnz(); ++t) d(static_cast<Eigen::Index>(i), r.index[t]) = r.value[t];
  }
  return d;
}

SparseRowMatrix SparseRowMatrix::with_min_cols(std::size_t n_cols) const {
  return SparseRowMatrix(std::max(n_cols, n_cols_), {row_ptr_.begin(), row_ptr_.end()},
                         {col_index_.begin(), col_index_.end()}, {values_.begin(), values_.end()});
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in, std::size_t min_cols) {
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  std::vector<double> labels;
  std::size_t max_index = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      return line.substr(start, pos - start);
    };

    const std::string_view label_tok = next_token();
    double label = 0.0;
    if (!parse_double(label_tok, label) || !std::isfinite(label)) {
      throw ParseError(line_no, "bad label '" + std::string(label_tok) + "'");
    }

    std::size_t prev = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError(line_no, "malformed token '" + std::string(tok) + "'");
      }
      std::uint64_t index = 0;
      const auto ires = std::from_chars(tok.data(), tok.data() + colon, index);
      if (ires.ec != std::errc{} || ires.ptr != tok.data() + colon || index == 0 ||
          index > UINT32_MAX) {
        throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
      }
      double value = 0.0;
      if (!parse_double(tok.substr(colon + 1), value) || !std::isfinite(value)) {
        throw ParseError(line_no, "non-numeric value in '" + std::string(tok) + "'");
      }
      if (index == prev) {
        throw ParseError(line_no, "duplicate index " + std::to_string(index));
      }
      if (index < prev) {
        throw ParseError(line_no, "non-increasing index " + std::to_string(index) +
                                      " after " + std::to_string(prev));
      }
      prev = index;
      max_index = std::max<std::size_t>(max_index, index);
      if (value != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(index - 1));
        val.push_back(value);
      }
    }
    ptr.push_back(val.size());
    labels.push_back(label);
  }
  if (labels.empty()) throw ParseError(0, "empty LIBSVM input");

  return {SparseRowMatrix(std::max(max_index, min_cols), std::move(ptr), std::move(idx),
                          std::move(val)),
          std::move(labels)};
}

void write_libsvm(std::ostream& out, const LabeledDataset& data) {
  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  const SparseRowMatrix& m = data.matrix;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    put(data.labels[i]);
    const SparseRow r = m.row(i);
    for (std::size_t t = 0; t < r.nnz(); ++t) {
      out << ' ' << (r.index[t] + 1) << ':';
      put(r.value[t]);
    }
    out << '\n';
  }
}

std::vector<double> remap_mnist_labels(std::span<const int> raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (int d : raw) {
    if (d < 0 || d > 9) {
      throw std::invalid_argument("MNIST label out of range: " + std::to_string(d));
    }
    out.push_back(d >= 5 ? 1.0 : -1.0);
  }
  return out;
}

NormalizedRows normalize_rows(const SparseRowMatrix& m) {
  std::vector<double> val(m.values().begin(), m.values().end());
  std::size_t zero_rows = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double nrm = m.row_norm(i);
    if (nrm == 0.0) {
      ++zero_rows;
      continue;
    }
    for (std::size_t t = m.row_ptr()[i]; t < m.row_ptr()[i + 1]; ++t) val[t] /= nrm;
  }
  return {SparseRowMatrix(m.cols(), {m.row_ptr().begin(), m.row_ptr().end()},
                         {m.col_index().begin(), m.col_index().end()}, std::move(val)), zero_rows};
}

SparseRowMatrix fold_labels(const LabeledDataset& data) {
  const SparseRowMatrix& m = data.matrix;
  if (data.labels.size() != m.rows()) {
    throw std::invalid_argument("fold_labels: label count does not match row count");
  }
  std::vector<double> val(m.values().begin(), m.values().end());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double c = data.labels[i];
    if (c != 1.0 && c != -1.0) {
      throw std::invalid_argument("fold_labels: labels must be +1 or -1 (row " +
                                  std::to_string(i) + ")");
    }
    if (c < 0) {
      for (std::size_t t = m.row_ptr()[i]; t < m.row_ptr()[i + 1]; ++t) val[t] = -val[t];
    }
  }
  return SparseRowMatrix(m.cols(), {m.row_ptr().begin(), m.row_ptr().end()},
                         {m.col_index().begin(), m.col_index().end()}, std::move(val));
}

}  // namespace saddlevr
