#pragma once

#include <optional>
#include <span>
#include <vector>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact {

/// Raw winding numbers of a nonvanishing scalar function along the coordinate
/// loops x_i -> (0, ..., x_i, ..., 0).
struct LoopWindings {
  MultiIndex winding;
  std::vector<double> raw;
  /// max |raw_i - round(raw_i)|
  double rounding_gap = 0.0;
  /// max |phase step| between adjacent loop samples
  double max_phase_step = 0.0;
  /// min |a| over the checked nodes
  double min_modulus = 0.0;
};

/// Total phase increment / 2 pi of a closed sampled loop. Throws NearSingular,
/// AmbiguousWinding when a step exceeds pi/2 or the raw value is more than 0.1
/// from an integer.
double loop_winding(std::span<const Complex> loop, double margin, double* max_step = nullptr);

/// Windings of a 1x1 map (or of the determinant of an n x n map) along the
/// coordinate loops through the origin node.
LoopWindings winding_vector(const SampledMap& f, double margin = 1e-6);

/// Same for a series, checked for invertibility on the whole grid.
LoopWindings winding_vector(const ScalarSeries& a, const GridShape& grid, double margin = 1e-6);

/// Continuous logarithm of a nonvanishing 1x1 map with zero winding. The value
/// at the origin node is `base` (principal log when absent). Throws
/// NonzeroWinding, PhaseJumpTooLarge.
SampledMap continuous_log(const SampledMap& f, std::optional<Complex> base = std::nullopt);

/// a = exp(b_minus) exp(u_minus) <c,.> exp(b_plus) exp(u_plus).
struct ScalarFactorization {
  MultiIndex c;
  ScalarSeries b_minus{1};
  ScalarSeries u_minus{1};
  ScalarSeries b_plus{1};
  ScalarSeries u_plus{1};
  /// sup over the verification grid of |reconstruction - a|
  double residual = 0.0;
  GridShape verification_grid;
};

struct ScalarFactorOptions {
  double margin = 1e-6;
  std::size_t max_nodes = std::size_t{1} << 22;
};

/// Constructive factorization: b = log|a| and u = log(a |a|^{-1} <-c,.>), each
/// projected to tolerance and split lexicographically. The mean of u is
/// moved into b_plus.
ScalarFactorization scalar_factorize(const ScalarSeries& a, const GridShape& grid, double tol,
                                     const ScalarFactorOptions& options = {});

/// Pointwise exp(b_minus) exp(u_minus) <c,.> exp(b_plus) exp(u_plus) on a grid.
SampledMap reconstruct(const ScalarFactorization& f, const GridShape& grid);

}  // namespace torfact
