#pragma once

#include <vector>

#include "torfact/polynomial.hpp"

namespace torfact {

/// P = E * D * F with E, F unimodular and D = diag(d_1, ..., d_n), each d_i
/// monic and d_i | d_{i+1}.
struct SmithForm {
  MatrixPolynomial E;
  MatrixPolynomial D;
  MatrixPolynomial F;
  std::vector<Poly> invariant_factors;
};

/// Smith normal form by elementary row and column operations with polynomial
/// division. Coefficients with magnitude <= tol * max|P| count as zero.
/// Throws IdenticallySingular when det P vanishes identically.
SmithForm smith_form(const MatrixPolynomial& p, double tol = 1e-10);

}  // namespace torfact
