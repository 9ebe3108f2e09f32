#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact {

/// Scalar polynomial, ascending coefficients p_0 + p_1 z + ...
using Poly = std::vector<Complex>;

namespace poly {

/// Drops leading coefficients with |c| <= tol.
Poly trim(Poly p, double tol = 0.0);
/// -1 for the zero polynomial.
int degree(const Poly& p);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, Complex s);
/// Shift by z^k (k >= 0).
Poly shift(const Poly& a, int k);
/// num = q * den + r with deg r < deg den; den is trimmed with tol first.
std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den, double tol = 0.0);
Complex eval(const Poly& p, Complex z);
double max_abs(const Poly& p);
/// Roots with multiplicity: companion-matrix eigenvalues polished by Newton steps.
std::vector<Complex> roots(const Poly& p);

}  // namespace poly

/// P(z) = A_0 + A_1 z + ... + A_M z^M with n x n complex coefficients. The
/// leading stored coefficient is nonzero (the zero polynomial stores nothing).
class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(std::size_t n = 1) : n_(n) {}
  MatrixPolynomial(std::size_t n, std::vector<MatrixXc> coeffs);

  static MatrixPolynomial identity(std::size_t n);
  static MatrixPolynomial from_entries(const std::vector<std::vector<Poly>>& entries);
  /// Requires a k = 1 series with nonnegative spectrum.
  static MatrixPolynomial from_series(const MatrixSeries& a);
  MatrixSeries to_series() const;

  std::size_t n() const noexcept { return n_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<MatrixXc>& coeffs() const noexcept { return coeffs_; }
  MatrixXc coeff(int k) const;
  Poly entry(std::size_t r, std::size_t c) const;
  std::vector<std::vector<Poly>> entries() const;

  MatrixXc eval(Complex z) const;
  /// Coefficients of the determinant (exact convolution arithmetic).
  Poly determinant() const;
  /// Finite eigenvalues (roots of det P) with multiplicity, from a block
  /// companion linearization. Semisimple multiple roots come out to working
  /// precision, unlike the roots of the scalar determinant.
  std::vector<Complex> eigenvalues() const;

  /// Removes leading coefficients whose max entry is <= tol.
  MatrixPolynomial trimmed(double tol) const;

  friend MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b);
  friend MatrixPolynomial operator+(const MatrixPolynomial& a, const MatrixPolynomial& b);
  friend MatrixPolynomial operator-(const MatrixPolynomial& a, const MatrixPolynomial& b);

  /// max over coefficients and entries of |a - b|
  friend double coefficient_distance(const MatrixPolynomial& a, const MatrixPolynomial& b);

 private:
  std::size_t n_;
  std::vector<MatrixXc> coeffs_;
};

}  // namespace torfact
