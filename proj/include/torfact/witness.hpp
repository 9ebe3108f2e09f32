#pragma once

#include <array>

#include <Eigen/Dense>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact {

/// Point of the unit sphere S^3 in R^4.
struct SpherePoint {
  std::array<double, 4> x{1.0, 0.0, 0.0, 0.0};

  double norm() const;
};

/// Collapse of the cube boundary to P = (1, 0, 0, 0). With y = 2x - 1,
/// rho = |y|_inf and u = y / |y|_2: psi(x) = (cos pi(1 - rho), sin pi(1 - rho) u).
/// The center goes to (-1, 0, 0, 0).
SpherePoint cube_to_sphere(const std::array<double, 3>& x);

/// Inverse of cube_to_sphere on S^3 minus {P, -P}; returns a point of the open cube.
std::array<double, 3> sphere_to_cube(const SpherePoint& s);

/// S(x) = [[x1 + i x2, -(x3 - i x4)], [x3 + i x4, x1 - i x2]]. Throws NotOnSphere
/// when | |s| - 1 | > tol.
Eigen::Matrix2cd su2_chart(const SpherePoint& s, double tol = 1e-12);

/// diag(1, ..., 1, S(psi(m x1, x2, x3))) sampled on a 3-torus grid. Requires
/// n >= 2 and grid sizes >= 8.
SampledMap build_witness(int n, int m, const GridShape& grid);

struct WitnessApproximation {
  MatrixSeries series{1, 1};
  /// max over grid nodes of the operator 2-norm of (series - witness)
  double sup_error = 0.0;
  /// min over grid nodes of the smallest singular value of the approximant
  double min_singular_value = 0.0;
  GridShape grid;
};

/// Degree-D trigonometric approximant of the witness from its samples on
/// `grid`. Requires grid > 2D per axis. Throws ApproximationTooCoarse when
/// sup_error >= 1, since invertibility is then no longer guaranteed.
WitnessApproximation witness_series(int n, int m, int degree, const GridShape& grid,
                                    Summation summation = Summation::Fejer);

}  // namespace torfact
