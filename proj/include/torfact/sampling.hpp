#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "torfact/series.hpp"

namespace torfact {

/// Uniform grid on T^k with nodes x = (i_1/N_1, ..., i_k/N_k), stored row-major
/// (last axis fastest).
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<int> sizes);
  static GridShape cube(std::size_t dim, int size) { return GridShape(std::vector<int>(dim, size)); }

  std::size_t dim() const noexcept { return sizes_.size(); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  int size(std::size_t axis) const { return sizes_.at(axis); }
  std::size_t node_count() const noexcept { return count_; }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  std::vector<int> node_index(std::size_t linear) const;
  std::size_t linear(std::span<const int> index) const;
  std::vector<double> coordinates(std::size_t linear) const;
  GridShape refined(int factor) const;

  bool operator==(const GridShape&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
};

using MatrixXc = Eigen::MatrixXcd;
using MatrixMap = Eigen::Map<MatrixXc>;
using ConstMatrixMap = Eigen::Map<const MatrixXc>;

/// n x n complex matrix samples at every node of a grid. Each node stores its
/// matrix column-major.
class SampledMap {
 public:
  SampledMap() = default;
  SampledMap(GridShape grid, std::size_t n);

  const GridShape& grid() const noexcept { return grid_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return grid_.dim(); }
  std::size_t node_count() const noexcept { return grid_.node_count(); }

  MatrixMap at(std::size_t node) { return MatrixMap(data_.data() + node * n_ * n_, n_, n_); }
  ConstMatrixMap at(std::size_t node) const { return ConstMatrixMap(data_.data() + node * n_ * n_, n_, n_); }
  Complex& entry(std::size_t node, std::size_t r, std::size_t c) { return data_[node * n_ * n_ + c * n_ + r]; }
  Complex entry(std::size_t node, std::size_t r, std::size_t c) const { return data_[node * n_ * n_ + c * n_ + r]; }

  std::span<const Complex> raw() const noexcept { return data_; }
  std::span<Complex> raw() noexcept { return data_; }

  /// Pointwise product (same grid and size).
  friend SampledMap operator*(const SampledMap& a, const SampledMap& b);
  /// Pointwise determinant as a 1x1 map.
  SampledMap determinant() const;

 private:
  GridShape grid_;
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

/// Samples a(x) = sum_j a_j exp(2 pi i j.x) at every grid node. Coefficients are
/// folded modulo the grid sizes and summed by an inverse FFT, which is exact at
/// the nodes for any spectrum. Throws InvalidArgument for grid sizes < 2.
SampledMap evaluate(const MatrixSeries& a, const GridShape& grid);
SampledMap evaluate(const ScalarSeries& a, const GridShape& grid);

enum class Summation {
  Fejer,      ///< Cesaro mean: weights prod_i (1 - |j_i|/(D+1)).
  Dirichlet,  ///< Plain truncation |j_i| <= D; reproduces trig polynomials of degree <= D.
};

struct Projection {
  MatrixSeries series{1, 1};
  /// max over nodes of the operator 2-norm of (series - samples)
  double sup_error = 0.0;
};

/// Degree-D trigonometric approximant built from the discrete Fourier
/// coefficients of the samples. Requires every grid size > 2D (GridTooCoarse).
/// Entries whose samples are all equal come back as exact constants.
Projection fejer_project(const SampledMap& x, int degree, Summation summation = Summation::Fejer);

/// Polar retraction X -> X (X^H X)^{-1/2} at every node. Throws SingularSample
/// (with the node) when sigma_min <= margin * max(1, sigma_max).
SampledMap unitarize(const SampledMap& x, double margin = 1e-12);

/// max over nodes of ||X^H X - I||_max.
double unitarity_defect(const SampledMap& x);

/// max over nodes of the operator 2-norm of a - b.
double sup_distance(const SampledMap& a, const SampledMap& b);

/// min over nodes of the smallest singular value.
double min_singular_value(const SampledMap& x);

}  // namespace torfact
