#include "torfact/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "torfact/error.hpp"

namespace torfact {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": torus dimensions " + std::to_string(a) +
                                                  " and " + std::to_string(b));
  }
}

}  // namespace

ScalarSeries ScalarSeries::constant(std::size_t dim, Complex value) {
  ScalarSeries a(dim);
  a.add_term(MultiIndex(dim), value);
  return a;
}

ScalarSeries ScalarSeries::character(const MultiIndex& j, Complex coeff) {
  ScalarSeries a(j.dim());
  a.add_term(j, coeff);
  return a;
}

Complex ScalarSeries::coeff(const MultiIndex& j) const {
  auto it = terms_.find(j);
  return it == terms_.end() ? Complex{} : it->second;
}

void ScalarSeries::add_term(const MultiIndex& j, Complex c) {
  require_same_dim(j.dim(), dim_, "add_term");
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(j, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

void ScalarSeries::append_sorted(const MultiIndex& j, Complex c) {
  if (c == Complex{}) return;
  terms_.emplace_hint(terms_.end(), j, c);
}

void ScalarSeries::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) <= threshold; });
}

ScalarSeries ScalarSeries::conj() const {
  ScalarSeries r(dim_);
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.append_sorted(-it->first, std::conj(it->second));
  return r;
}

std::vector<int> ScalarSeries::degrees() const {
  std::vector<int> d(dim_, 0);
  for (const auto& [j, c] : terms_) {
    for (std::size_t i = 0; i < dim_; ++i) d[i] = std::max(d[i], std::abs(j[i]));
  }
  return d;
}

ScalarSeries& ScalarSeries::operator+=(const ScalarSeries& other) {
  require_same_dim(dim_, other.dim_, "add");
  for (const auto& [j, c] : other.terms_) add_term(j, c);
  return *this;
}

ScalarSeries& ScalarSeries::operator-=(const ScalarSeries& other) {
  require_same_dim(dim_, other.dim_, "subtract");
  for (const auto& [j, c] : other.terms_) add_term(j, -c);
  return *this;
}

ScalarSeries& ScalarSeries::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [j, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
  return *this;
}

ScalarSeries ScalarSeries::operator-() const {
  ScalarSeries r = *this;
  for (auto& [j, c] : r.terms_) c = -c;
  return r;
}

MatrixSeries::MatrixSeries(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), dim_(dim), entries_(rows * cols, ScalarSeries(dim)) {}

MatrixSeries MatrixSeries::identity(std::size_t n, std::size_t dim) {
  MatrixSeries m(n, dim);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarSeries::constant(dim, 1.0);
  return m;
}

MatrixSeries MatrixSeries::diagonal(const std::vector<ScalarSeries>& entries) {
  if (entries.empty()) throw Error(ErrorKind::InvalidArgument, "diagonal of zero entries");
  const std::size_t dim = entries.front().dim();
  MatrixSeries m(entries.size(), dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require_same_dim(entries[i].dim(), dim, "diagonal");
    m(i, i) = entries[i];
  }
  return m;
}

MatrixSeries MatrixSeries::from_scalar(const ScalarSeries& a) {
  MatrixSeries m(1, a.dim());
  m(0, 0) = a;
  return m;
}

std::vector<int> MatrixSeries::degrees() const {
  std::vector<int> d(dim_, 0);
  for (const auto& e : entries_) {
    auto de = e.degrees();
    for (std::size_t i = 0; i < dim_; ++i) d[i] = std::max(d[i], de[i]);
  }
  return d;
}

std::size_t MatrixSeries::term_count() const {
  return std::accumulate(entries_.begin(), entries_.end(), std::size_t{0},
                         [](std::size_t s, const ScalarSeries& e) { return s + e.size(); });
}

MatrixSeries& MatrixSeries::operator+=(const MatrixSeries& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  require_same_dim(dim_, other.dim_, "add");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

MatrixSeries& MatrixSeries::operator-=(const MatrixSeries& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  require_same_dim(dim_, other.dim_, "subtract");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

MatrixSeries& MatrixSeries::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

ScalarSeries LexSplit::plus_with_constant() const {
  ScalarSeries r = plus;
  r.add_term(MultiIndex(plus.dim()), zero);
  return r;
}

ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b) {
  require_same_dim(a.dim(), b.dim(), "mul");
  ScalarSeries r(a.dim());
  for (const auto& [ja, ca] : a.terms()) {
    for (const auto& [jb, cb] : b.terms()) r.add_term(ja + jb, ca * cb);
  }
  return r;
}

MatrixSeries mul(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "inner sizes " + std::to_string(a.cols()) + " and " +
                                                  std::to_string(b.rows()));
  }
  require_same_dim(a.dim(), b.dim(), "mul");
  MatrixSeries r(a.rows(), b.cols(), a.dim());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      ScalarSeries acc(a.dim());
      for (std::size_t l = 0; l < a.cols(); ++l) acc += mul(a(i, l), b(l, j));
      r(i, j) = std::move(acc);
    }
  }
  return r;
}

LexSplit split_pm(const ScalarSeries& a) {
  LexSplit s{ScalarSeries(a.dim()), Complex{}, ScalarSeries(a.dim())};
  for (const auto& [j, c] : a.terms()) {
    switch (j.lex_sign()) {
      case -1: s.minus.append_sorted(j, c); break;
      case 0: s.zero = c; break;
      default: s.plus.append_sorted(j, c); break;
    }
  }
  return s;
}

namespace {

ScalarSeries det_recursive(const MatrixSeries& a, std::vector<std::size_t>& rows, std::vector<std::size_t>& cols) {
  const std::size_t m = rows.size();
  if (m == 1) return a(rows[0], cols[0]);
  if (m == 2) {
    return mul(a(rows[0], cols[0]), a(rows[1], cols[1])) - mul(a(rows[0], cols[1]), a(rows[1], cols[0]));
  }
  ScalarSeries acc(a.dim());
  const std::size_t r0 = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < m; ++k) {
    const ScalarSeries& pivot = a(r0, cols[k]);
    if (pivot.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(m - 1);
    for (std::size_t c = 0; c < m; ++c) {
      if (c != k) sub_cols.push_back(cols[c]);
    }
    ScalarSeries minor = mul(pivot, det_recursive(a, sub_rows, sub_cols));
    if (k % 2 == 0) {
      acc += minor;
    } else {
      acc -= minor;
    }
  }
  return acc;
}

}  // namespace

ScalarSeries det_series(const MatrixSeries& a) {
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  std::vector<std::size_t> rows(a.rows()), cols(a.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  return det_recursive(a, rows, cols);
}

std::set<MultiIndex> spectrum(const ScalarSeries& a) {
  std::set<MultiIndex> s;
  for (const auto& kv : a.terms()) s.insert(s.end(), kv.first);
  return s;
}

std::set<MultiIndex> spectrum(const MatrixSeries& a) {
  std::set<MultiIndex> s;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (const auto& kv : a(i, j).terms()) s.insert(kv.first);
    }
  }
  return s;
}

double wiener_norm(const ScalarSeries& a) {
  double s = 0.0;
  for (const auto& kv : a.terms()) s += std::abs(kv.second);
  return s;
}

double wiener_norm(const MatrixSeries& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, wiener_norm(a(i, j)));
  }
  return m;
}

MatrixSeries transpose(const MatrixSeries& a) {
  MatrixSeries t(a.cols(), a.rows(), a.dim());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

}  // namespace torfact
