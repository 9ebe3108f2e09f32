#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng)};
}

/// Dense random series with every index in [-degree, degree]^dim.
inline ScalarSeries random_series(Rng& rng, std::size_t dim, int degree, double scale = 1.0) {
  ScalarSeries s(dim);
  std::vector<int> idx(dim, -degree);
  while (true) {
    s.add_term(MultiIndex(std::span<const int>(idx)), random_complex(rng, scale));
    std::size_t axis = 0;
    while (axis < dim && idx[axis] == degree) idx[axis++] = -degree;
    if (axis == dim) break;
    ++idx[axis];
  }
  return s;
}

/// Sparse random series with `terms` terms drawn from [-degree, degree]^dim.
inline ScalarSeries sparse_series(Rng& rng, std::size_t dim, int degree, int terms, double scale = 1.0) {
  std::uniform_int_distribution<int> pick(-degree, degree);
  ScalarSeries s(dim);
  for (int t = 0; t < terms; ++t) {
    MultiIndex j(dim);
    for (std::size_t i = 0; i < dim; ++i) j[i] = pick(rng);
    s.add_term(j, random_complex(rng, scale));
  }
  return s;
}

inline MatrixSeries random_matrix_series(Rng& rng, std::size_t n, std::size_t dim, int degree, double scale = 1.0) {
  MatrixSeries a(n, dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a(r, c) = random_series(rng, dim, degree, scale);
  }
  return a;
}

/// Laurent matrix polynomial on the circle with exponents in [-p, q]: z^{-p}
/// times a product of p + q random degree-one factors (elementary factors on
/// random subspaces of random rank, between random unitaries). Every det root r has
/// min(|r|, 1/|r|) <= rho, so the symbol stays well inside the invertible set.
inline MatrixSeries random_laurent(Rng& rng, std::size_t n, int p, int q, double rho = 0.6) {
  const auto dim = static_cast<Eigen::Index>(n);
  auto unitary = [&] {
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = random_complex(rng);
    return Eigen::MatrixXcd(Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ());
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Coefficients of the running product P(z), ascending.
  std::vector<Eigen::MatrixXcd> poly{unitary()};
  for (int f = 0; f < p + q; ++f) {
    const bool inside = unit(rng) < 0.5;
    const double mod = inside ? 0.1 + (rho - 0.1) * unit(rng) : 1.0 / rho + (4.0 - 1.0 / rho) * unit(rng);
    const Complex r = std::polar(mod, 2.0 * 3.141592653589793 * unit(rng));
    const double s = std::max(1.0, mod);
    // Projector onto a random subspace of random rank.
    const auto rank = std::uniform_int_distribution<Eigen::Index>(1, dim)(rng);
    const Eigen::MatrixXcd basis = unitary().leftCols(rank);
    const Eigen::MatrixXcd proj = basis * basis.adjoint();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    // E(z) = (I - P) + (z - r)/s P, followed by a unitary.
    const Eigen::MatrixXcd w = unitary();
    const Eigen::MatrixXcd e0 = (id - proj - (r / s) * proj) * w;
    const Eigen::MatrixXcd e1 = (proj / s) * w;
    std::vector<Eigen::MatrixXcd> next(poly.size() + 1, Eigen::MatrixXcd::Zero(dim, dim));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k] * e0;
      next[k + 1] += poly[k] * e1;
    }
    poly = std::move(next);
  }
  MatrixSeries a(n, 1);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c).add_term(MultiIndex{static_cast<int>(k) - p}, poly[k](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      }
    }
  }
  return a;
}

/// Anti-Hermitian trigonometric polynomial on T^k with Wiener norm `norm`.
inline MatrixSeries random_anti_hermitian(Rng& rng, std::size_t n, std::size_t dim, int degree, double norm) {
  MatrixSeries h = random_matrix_series(rng, n, dim, degree);
  MatrixSeries out(n, dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      // (H - H^*) / 2 with H^*_{rc}(x) = conj(H_{cr}(x))
      out(r, c) = (h(r, c) - h(c, r).conj()) * Complex(0.5);
    }
  }
  const double w = wiener_norm(out);
  return w > 0 ? out * Complex(norm / w) : out;
}

inline double max_abs_diff(const SampledMap& a, const SampledMap& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
  return m;
}

}  // namespace torfact::testing
