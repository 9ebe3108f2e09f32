#pragma once

#include <vector>

#include "torfact/polynomial.hpp"
#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact {

/// A = A_minus * diag(z^kappa_1, ..., z^kappa_n) * A_plus on the unit circle.
struct FactorizationResult {
  MatrixSeries a_minus{1, 1};  ///< spectrum <= 0, det nonvanishing on |z| >= 1
  std::vector<int> kappa;      ///< partial indices, sorted descending
  MatrixSeries a_plus{1, 1};   ///< spectrum >= 0, det nonvanishing on |z| <= 1
  /// sup over the verification grid of max_ij |A - A_minus Lambda A_plus|
  double residual = 0.0;
  /// min over det roots of ||r| - 1|
  double root_margin = 0.0;
  double min_abs_det_minus = 0.0;
  double min_abs_det_plus = 0.0;
  int verification_grid = 0;

  MatrixSeries middle() const;
  MatrixSeries product() const;
  int index_sum() const;
};

struct CircleFactorOptions {
  /// Roots of det closer than this to |z| = 1 make the symbol NearSingular.
  double root_margin = 1e-8;
  /// Relative threshold for numerically vanishing leading coefficients.
  double trim_tol = 1e-9;
};

/// Right Wiener-Hopf factorization of a Laurent matrix polynomial on T^1.
///
/// z^m A = P is made polynomial; the roots of det P inside the disk are
/// deflated to the left one at a time (unitary row transform plus division
/// by z - r), leaving P = M R with R plus-invertible. M is then column
/// reduced by unimodular column operations; its column degrees give the
/// partial indices. Throws NearSingular, NoConvergence.
FactorizationResult wh_factorize(const MatrixSeries& a, int grid = 256, double tol = 1e-8,
                                 const CircleFactorOptions& options = {});

/// Winding number of det A along T^1.
int mean_motion(const MatrixSeries& a, int grid = 256, double margin = 1e-6);

/// A + delta I with |delta| <= eps / 2 whose determinant avoids the circle.
struct Regularization {
  MatrixPolynomial output;
  Complex shift{};
  bool changed = false;
  /// max coefficient-entry distance to the input
  double perturbation = 0.0;
  /// min over det roots of ||r| - 1| (infinite if det is constant)
  double root_margin = 0.0;
  /// min |det| on a 1024-point grid of the circle
  double min_abs_det = 0.0;
  int degree = 0;
};

/// Inputs already invertible with root margin >= margin are returned
/// unchanged. Otherwise sixteen shifts delta = (eps/2) e^{2 pi i k/16} are
/// tried and the one with the largest root margin wins (earliest on ties).
Regularization regularize(const MatrixPolynomial& p, double eps, double margin = 1e-6);

/// min over det roots of ||r| - 1|; +inf for a constant nonzero determinant.
double circle_root_margin(const MatrixPolynomial& p);

}  // namespace torfact
