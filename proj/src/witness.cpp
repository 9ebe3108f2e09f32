#include "torfact/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "torfact/error.hpp"
#include "torfact/parallel.hpp"

namespace torfact {

double SpherePoint::norm() const { return std::hypot(std::hypot(x[0], x[1]), std::hypot(x[2], x[3])); }

SpherePoint cube_to_sphere(const std::array<double, 3>& x) {
  std::array<double, 3> y{};
  double rho = 0.0;
  double l2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    y[i] = 2.0 * x[i] - 1.0;
    rho = std::max(rho, std::abs(y[i]));
    l2 += y[i] * y[i];
  }
  rho = std::min(rho, 1.0);
  l2 = std::sqrt(l2);
  const double angle = std::numbers::pi * (1.0 - rho);
  SpherePoint s;
  s.x[0] = std::cos(angle);
  const double sn = std::sin(angle);
  if (l2 == 0.0) {
    // Any fixed direction; the sine factor is zero here anyway.
    s.x[1] = sn;
    s.x[2] = s.x[3] = 0.0;
    return s;
  }
  for (int i = 0; i < 3; ++i) s.x[i + 1] = sn * y[i] / l2;
  return s;
}

std::array<double, 3> sphere_to_cube(const SpherePoint& s) {
  const double v = std::hypot(s.x[1], std::hypot(s.x[2], s.x[3]));
  const double angle = std::atan2(v, s.x[0]);
  const double rho = 1.0 - angle / std::numbers::pi;
  std::array<double, 3> out{0.5, 0.5, 0.5};
  if (v == 0.0) return out;
  const double inf = std::max({std::abs(s.x[1]), std::abs(s.x[2]), std::abs(s.x[3])});
  for (int i = 0; i < 3; ++i) out[i] = 0.5 * (rho * s.x[i + 1] / inf + 1.0);
  return out;
}

Eigen::Matrix2cd su2_chart(const SpherePoint& s, double tol) {
  const double nrm = s.norm();
  if (!(std::abs(nrm - 1.0) <= tol)) {
    throw Error(ErrorKind::NotOnSphere, "point has norm " + std::to_string(nrm));
  }
  const auto& x = s.x;
  Eigen::Matrix2cd m;
  m(0, 0) = Complex(x[0], x[1]);
  m(0, 1) = -Complex(x[2], -x[3]);
  m(1, 0) = Complex(x[2], x[3]);
  m(1, 1) = Complex(x[0], -x[1]);
  return m;
}

SampledMap build_witness(int n, int m, const GridShape& grid) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "witness needs n >= 2");
  if (grid.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "witness lives on T^3");
  for (int s : grid.sizes()) {
    if (s < 8) throw Error(ErrorKind::InvalidArgument, "witness grid sizes must be >= 8");
  }
  const auto nn = static_cast<std::size_t>(n);
  SampledMap out(grid, nn);
  const int n1 = grid.size(0);
  const std::size_t count = grid.node_count();
  const std::size_t chunk = 4096;
  parallel_for((count + chunk - 1) / chunk, [&](std::size_t block) {
    const std::size_t end = std::min(count, (block + 1) * chunk);
    for (std::size_t node = block * chunk; node < end; ++node) {
      const std::vector<int> idx = grid.node_index(node);
      // d_m in integer arithmetic keeps boundary nodes exactly on the boundary.
      const long wrapped = ((static_cast<long>(m) * idx[0]) % n1 + n1) % n1;
      const std::array<double, 3> x{static_cast<double>(wrapped) / n1, static_cast<double>(idx[1]) / grid.size(1),
                                    static_cast<double>(idx[2]) / grid.size(2)};
      auto block_map = out.at(node);
      block_map.setIdentity();
      block_map.bottomRightCorner(2, 2) = su2_chart(cube_to_sphere(x), 1e-12);
    }
  });
  return out;
}

WitnessApproximation witness_series(int n, int m, int degree, const GridShape& grid, Summation summation) {
  const SampledMap w = build_witness(n, m, grid);
  Projection p = fejer_project(w, degree, summation);
  WitnessApproximation out;
  out.series = std::move(p.series);
  out.sup_error = p.sup_error;
  out.grid = grid;
  if (!(out.sup_error < 1.0)) {
    throw Error(ErrorKind::ApproximationTooCoarse,
                "degree " + std::to_string(degree) + " approximant has sup error " + std::to_string(out.sup_error));
  }
  out.min_singular_value = min_singular_value(evaluate(out.series, grid));
  return out;
}

}  // namespace torfact
