#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "torfact/multi_index.hpp"

namespace torfact {

using Complex = std::complex<double>;

/// Finitely supported Fourier series on T^k: a(x) = sum_j a_j exp(2 pi i j.x).
///
/// Exact zeros are never stored, so the key set is the Bohr-Fourier spectrum.
class ScalarSeries {
 public:
  using Terms = std::map<MultiIndex, Complex>;

  explicit ScalarSeries(std::size_t dim = 1) : dim_(dim) {}

  static ScalarSeries constant(std::size_t dim, Complex value);
  static ScalarSeries character(const MultiIndex& j, Complex coeff = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Complex coeff(const MultiIndex& j) const;
  /// Accumulates c into the coefficient of j; the term is dropped if the sum is exactly zero.
  void add_term(const MultiIndex& j, Complex c);
  /// Appends a term known to be strictly larger than every stored index.
  void append_sorted(const MultiIndex& j, Complex c);
  /// Removes every term with |a_j| <= threshold.
  void prune(double threshold);

  /// Pointwise complex conjugate: coefficients conj(a_{-j}) at j.
  ScalarSeries conj() const;
  /// Largest |j_i| over the spectrum, per axis.
  std::vector<int> degrees() const;

  ScalarSeries& operator+=(const ScalarSeries& other);
  ScalarSeries& operator-=(const ScalarSeries& other);
  ScalarSeries& operator*=(Complex s);
  ScalarSeries operator-() const;
  friend ScalarSeries operator+(ScalarSeries a, const ScalarSeries& b) { return a += b; }
  friend ScalarSeries operator-(ScalarSeries a, const ScalarSeries& b) { return a -= b; }
  friend ScalarSeries operator*(ScalarSeries a, Complex s) { return a *= s; }
  friend ScalarSeries operator*(Complex s, ScalarSeries a) { return a *= s; }
  bool operator==(const ScalarSeries&) const = default;

 private:
  std::size_t dim_;
  Terms terms_;
};

/// rows x cols array of scalar series sharing one torus dimension.
class MatrixSeries {
 public:
  MatrixSeries(std::size_t rows, std::size_t cols, std::size_t dim);
  MatrixSeries(std::size_t n, std::size_t dim) : MatrixSeries(n, n, dim) {}

  static MatrixSeries identity(std::size_t n, std::size_t dim);
  static MatrixSeries diagonal(const std::vector<ScalarSeries>& entries);
  static MatrixSeries from_scalar(const ScalarSeries& a);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  ScalarSeries& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const ScalarSeries& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::vector<int> degrees() const;
  std::size_t term_count() const;

  MatrixSeries& operator+=(const MatrixSeries& other);
  MatrixSeries& operator-=(const MatrixSeries& other);
  MatrixSeries& operator*=(Complex s);
  friend MatrixSeries operator+(MatrixSeries a, const MatrixSeries& b) { return a += b; }
  friend MatrixSeries operator-(MatrixSeries a, const MatrixSeries& b) { return a -= b; }
  friend MatrixSeries operator*(MatrixSeries a, Complex s) { return a *= s; }
  bool operator==(const MatrixSeries&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t dim_;
  std::vector<ScalarSeries> entries_;
};

/// a = minus + zero + plus with spectrum(minus) in Gamma_- \ {0} and spectrum(plus) in
/// Gamma_+ \ {0} for the lexicographic order.
struct LexSplit {
  ScalarSeries minus;
  Complex zero;
  ScalarSeries plus;

  /// Two-way split used by factorizations: the constant joins the plus side.
  ScalarSeries plus_with_constant() const;
};

/// Coefficient convolution. Throws DimensionMismatch.
ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b);
MatrixSeries mul(const MatrixSeries& a, const MatrixSeries& b);

LexSplit split_pm(const ScalarSeries& a);

/// Determinant by cofactor expansion with exact convolutions.
ScalarSeries det_series(const MatrixSeries& a);

std::set<MultiIndex> spectrum(const ScalarSeries& a);
std::set<MultiIndex> spectrum(const MatrixSeries& a);

/// sum_j |a_j|. For matrices: the largest entry norm.
double wiener_norm(const ScalarSeries& a);
double wiener_norm(const MatrixSeries& a);

MatrixSeries transpose(const MatrixSeries& a);

}  // namespace torfact
