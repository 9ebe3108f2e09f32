#pragma once

#include <vector>

#include "torfact/series.hpp"

namespace torfact {

struct OracleReport {
  std::vector<int> kappa;  ///< sorted descending
  int sections = 0;        ///< block size N of the first section (2N is the check)
  /// largest singular value counted as kernel, relative to the section norm
  double kernel_level = 0.0;
  /// smallest singular value not counted, relative to the section norm
  double bulk_level = 0.0;
};

/// Partial indices from finite sections of block Toeplitz matrices
/// T(z^{-k} A) = (A_{i-j} shifted by k). dim ker T(z^{-k} A) = sum max(0, k - kappa_i),
/// so second differences in k give the index multiplicities. Each kernel
/// dimension is the number of singular values below 1e-6 (relative) of the
/// section made of the first N block columns and every block row they touch.
/// `sections` = 0 picks N from the root moduli of det A. Throws
/// UnstableSections when N and 2N disagree, NearSingular on a det root at |z| = 1.
OracleReport toeplitz_oracle(const MatrixSeries& a, int sections = 0);

/// Convenience wrapper returning only the sorted indices.
std::vector<int> toeplitz_indices_oracle(const MatrixSeries& a, int sections = 0);

}  // namespace torfact
