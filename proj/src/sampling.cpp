#include "torfact/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "torfact/error.hpp"
#include "torfact/parallel.hpp"

namespace torfact {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place unnormalized multi-dimensional DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
void fft_inplace(std::vector<Complex>& buffer, const std::vector<int>& sizes, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(), data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int wrap(int j, int n) {
  const int r = j % n;
  return r < 0 ? r + n : r;
}

double operator_norm(const MatrixXc& m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<MatrixXc> svd(m);
  return svd.singularValues()(0);
}

void require_grid(const GridShape& grid) {
  if (grid.dim() == 0) throw Error(ErrorKind::InvalidArgument, "grid has no axes");
  for (int s : grid.sizes()) {
    if (s < 2) throw Error(ErrorKind::InvalidArgument, "grid sizes must be >= 2, got " + std::to_string(s));
  }
}

}  // namespace

GridShape::GridShape(std::vector<int> sizes) : sizes_(std::move(sizes)), strides_(sizes_.size()) {
  count_ = 1;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (sizes_[i] < 1) throw Error(ErrorKind::InvalidArgument, "grid sizes must be positive");
    strides_[i] = count_;
    count_ *= static_cast<std::size_t>(sizes_[i]);
  }
}

std::vector<int> GridShape::node_index(std::size_t linear) const {
  std::vector<int> idx(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    idx[i] = static_cast<int>((linear / strides_[i]) % static_cast<std::size_t>(sizes_[i]));
  }
  return idx;
}

std::size_t GridShape::linear(std::span<const int> index) const {
  std::size_t l = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) l += static_cast<std::size_t>(wrap(index[i], sizes_[i])) * strides_[i];
  return l;
}

std::vector<double> GridShape::coordinates(std::size_t linear) const {
  auto idx = node_index(linear);
  std::vector<double> x(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) x[i] = static_cast<double>(idx[i]) / sizes_[i];
  return x;
}

GridShape GridShape::refined(int factor) const {
  std::vector<int> s = sizes_;
  for (int& v : s) v *= factor;
  return GridShape(std::move(s));
}

SampledMap::SampledMap(GridShape grid, std::size_t n)
    : grid_(std::move(grid)), n_(n), data_(grid_.node_count() * n * n) {}

SampledMap operator*(const SampledMap& a, const SampledMap& b) {
  if (!(a.grid() == b.grid()) || a.n() != b.n()) {
    throw Error(ErrorKind::DimensionMismatch, "pointwise product of maps on different grids or sizes");
  }
  SampledMap r(a.grid(), a.n());
  for (std::size_t k = 0; k < a.node_count(); ++k) r.at(k).noalias() = a.at(k) * b.at(k);
  return r;
}

SampledMap SampledMap::determinant() const {
  SampledMap d(grid_, 1);
  for (std::size_t k = 0; k < node_count(); ++k) d.entry(k, 0, 0) = n_ == 1 ? at(k)(0, 0) : at(k).determinant();
  return d;
}

SampledMap evaluate(const MatrixSeries& a, const GridShape& grid) {
  require_grid(grid);
  if (grid.dim() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "grid and series dimensions differ");
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "sampled maps are square");
  const std::size_t n = a.rows();
  SampledMap out(grid, n);
  std::vector<Complex> buffer(grid.node_count());
  std::vector<int> folded(grid.dim());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const ScalarSeries& e = a(r, c);
      if (e.is_zero()) continue;
      if (e.size() == 1 && e.terms().begin()->first.is_zero()) {
        const Complex v = e.terms().begin()->second;
        for (std::size_t k = 0; k < grid.node_count(); ++k) out.entry(k, r, c) = v;
        continue;
      }
      std::fill(buffer.begin(), buffer.end(), Complex{});
      for (const auto& [j, coeff] : e.terms()) {
        for (std::size_t i = 0; i < grid.dim(); ++i) folded[i] = j[i];
        buffer[grid.linear(folded)] += coeff;
      }
      fft_inplace(buffer, grid.sizes(), FFTW_BACKWARD);
      for (std::size_t k = 0; k < grid.node_count(); ++k) out.entry(k, r, c) = buffer[k];
    }
  }
  return out;
}

SampledMap evaluate(const ScalarSeries& a, const GridShape& grid) { return evaluate(MatrixSeries::from_scalar(a), grid); }

Projection fejer_project(const SampledMap& x, int degree, Summation summation) {
  const GridShape& grid = x.grid();
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "negative degree cap");
  for (int s : grid.sizes()) {
    if (s <= 2 * degree) {
      throw Error(ErrorKind::GridTooCoarse, "grid size " + std::to_string(s) + " must exceed 2D = " +
                                                std::to_string(2 * degree));
    }
  }
  const std::size_t n = x.n();
  const std::size_t dim = grid.dim();
  const double inv_count = 1.0 / static_cast<double>(grid.node_count());

  std::vector<double> axis_weight(2 * degree + 1);
  for (int j = -degree; j <= degree; ++j) {
    axis_weight[j + degree] = summation == Summation::Fejer ? 1.0 - std::abs(j) / (degree + 1.0) : 1.0;
  }

  // Frequencies in lexicographic order so terms can be appended in sorted order.
  const std::size_t side = static_cast<std::size_t>(2 * degree + 1);
  std::size_t freq_count = 1;
  for (std::size_t i = 0; i < dim; ++i) freq_count *= side;

  Projection result{MatrixSeries(n, dim), 0.0};
  std::vector<Complex> buffer(grid.node_count());
  std::vector<int> j_entries(dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Complex first = x.entry(0, r, c);
      bool constant = true;
      for (std::size_t k = 0; k < grid.node_count() && constant; ++k) constant = x.entry(k, r, c) == first;
      if (constant) {
        result.series(r, c) = ScalarSeries::constant(dim, first);
        continue;
      }
      for (std::size_t k = 0; k < grid.node_count(); ++k) buffer[k] = x.entry(k, r, c);
      fft_inplace(buffer, grid.sizes(), FFTW_FORWARD);
      ScalarSeries& out = result.series(r, c);
      for (std::size_t f = 0; f < freq_count; ++f) {
        std::size_t rem = f;
        double w = 1.0;
        for (std::size_t i = dim; i-- > 0;) {
          const int j = static_cast<int>(rem % side) - degree;
          rem /= side;
          j_entries[i] = j;
          w *= axis_weight[j + degree];
        }
        if (w == 0.0) continue;
        out.append_sorted(MultiIndex(std::span<const int>(j_entries)), buffer[grid.linear(j_entries)] * inv_count * w);
      }
    }
  }
  result.sup_error = sup_distance(evaluate(result.series, grid), x);
  return result;
}

SampledMap unitarize(const SampledMap& x, double margin) {
  SampledMap out(x.grid(), x.n());
  parallel_for(x.node_count(), [&](std::size_t k) {
    if (x.n() == 1) {
      const Complex v = x.entry(k, 0, 0);
      const double a = std::abs(v);
      if (a <= margin * std::max(1.0, a)) {
        throw Error(ErrorKind::SingularSample, "node " + std::to_string(k));
      }
      out.entry(k, 0, 0) = v / a;
      return;
    }
    Eigen::JacobiSVD<MatrixXc> svd(x.at(k), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= margin * std::max(1.0, s(0))) {
      auto idx = x.grid().node_index(k);
      std::string where;
      for (int i : idx) where += (where.empty() ? "" : ",") + std::to_string(i);
      throw Error(ErrorKind::SingularSample, "node " + std::to_string(k) + " at grid index (" + where +
                                                 "), sigma_min = " + std::to_string(s(s.size() - 1)));
    }
    out.at(k).noalias() = svd.matrixU() * svd.matrixV().adjoint();
  });
  return out;
}

double unitarity_defect(const SampledMap& x) {
  double worst = 0.0;
  const MatrixXc id = MatrixXc::Identity(x.n(), x.n());
  for (std::size_t k = 0; k < x.node_count(); ++k) {
    worst = std::max(worst, (x.at(k).adjoint() * x.at(k) - id).cwiseAbs().maxCoeff());
  }
  return worst;
}

double sup_distance(const SampledMap& a, const SampledMap& b) {
  if (!(a.grid() == b.grid()) || a.n() != b.n()) throw Error(ErrorKind::DimensionMismatch, "maps differ in shape");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.node_count(); ++k) worst = std::max(worst, operator_norm(a.at(k) - b.at(k)));
  return worst;
}

double min_singular_value(const SampledMap& x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.node_count(); ++k) {
    if (x.n() == 1) {
      best = std::min(best, std::abs(x.entry(k, 0, 0)));
    } else {
      Eigen::JacobiSVD<MatrixXc> svd(x.at(k));
      best = std::min(best, svd.singularValues()(x.n() - 1));
    }
  }
  return best;
}

}  // namespace torfact
