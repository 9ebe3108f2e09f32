#include "torfact/smith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torfact/error.hpp"

namespace torfact {

namespace {

using PolyGrid = std::vector<std::vector<Poly>>;

PolyGrid identity_grid(std::size_t n) {
  PolyGrid g(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = Poly{1.0};
  return g;
}

class Reducer {
 public:
  Reducer(const MatrixPolynomial& p, double abs_tol)
      : n_(p.n()), tol_(abs_tol), w_(p.entries()), e_(identity_grid(n_)), f_(identity_grid(n_)) {
    for (auto& row : w_) {
      for (auto& x : row) x = poly::trim(x, tol_);
    }
  }

  // row_i -= q * row_k
  void row_axpy(std::size_t i, std::size_t k, const Poly& q) {
    for (std::size_t c = 0; c < n_; ++c) w_[i][c] = poly::trim(poly::sub(w_[i][c], poly::mul(q, w_[k][c])), tol_);
    for (std::size_t r = 0; r < n_; ++r) e_[r][k] = poly::add(e_[r][k], poly::mul(e_[r][i], q));
  }

  // col_j -= col_k * q
  void col_axpy(std::size_t j, std::size_t k, const Poly& q) {
    for (std::size_t r = 0; r < n_; ++r) w_[r][j] = poly::trim(poly::sub(w_[r][j], poly::mul(w_[r][k], q)), tol_);
    for (std::size_t c = 0; c < n_; ++c) f_[k][c] = poly::add(f_[k][c], poly::mul(q, f_[j][c]));
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    std::swap(w_[i], w_[k]);
    for (std::size_t r = 0; r < n_; ++r) std::swap(e_[r][i], e_[r][k]);
  }

  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t r = 0; r < n_; ++r) std::swap(w_[r][j], w_[r][k]);
    std::swap(f_[j], f_[k]);
  }

  void scale_row(std::size_t k, Complex s) {
    for (std::size_t c = 0; c < n_; ++c) w_[k][c] = poly::scale(w_[k][c], s);
    for (std::size_t r = 0; r < n_; ++r) e_[r][k] = poly::scale(e_[r][k], 1.0 / s);
  }

  void reduce() {
    constexpr int kMaxPasses = 10000;
    int passes = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      while (true) {
        if (++passes > kMaxPasses) throw Error(ErrorKind::NoConvergence, "Smith reduction did not terminate");
        if (!bring_min_degree_pivot(k)) {
          throw Error(ErrorKind::IdenticallySingular, "matrix polynomial has rank < " + std::to_string(n_));
        }
        bool clean = true;
        for (std::size_t i = k + 1; i < n_; ++i) {
          if (w_[i][k].empty()) continue;
          auto [q, r] = poly::divmod(w_[i][k], w_[k][k]);
          row_axpy(i, k, q);
          w_[i][k] = poly::trim(r, tol_);
          clean = clean && w_[i][k].empty();
        }
        for (std::size_t j = k + 1; j < n_; ++j) {
          if (w_[k][j].empty()) continue;
          auto [q, r] = poly::divmod(w_[k][j], w_[k][k]);
          col_axpy(j, k, q);
          w_[k][j] = poly::trim(r, tol_);
          clean = clean && w_[k][j].empty();
        }
        if (!clean) continue;
        // The pivot must divide everything left in the trailing block.
        bool divides = true;
        for (std::size_t i = k + 1; i < n_ && divides; ++i) {
          for (std::size_t j = k + 1; j < n_ && divides; ++j) {
            if (w_[i][j].empty()) continue;
            auto r = poly::trim(poly::divmod(w_[i][j], w_[k][k]).second, tol_);
            if (!r.empty()) {
              row_axpy(k, i, Poly{-1.0});  // row_k += row_i
              divides = false;
            }
          }
        }
        if (divides) break;
      }
      scale_row(k, 1.0 / w_[k][k].back());
    }
  }

  SmithForm result() const {
    SmithForm s;
    PolyGrid d(n_, std::vector<Poly>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      d[i][i] = w_[i][i];
      s.invariant_factors.push_back(w_[i][i]);
    }
    s.E = MatrixPolynomial::from_entries(e_);
    s.D = MatrixPolynomial::from_entries(d);
    s.F = MatrixPolynomial::from_entries(f_);
    return s;
  }

 private:
  // Moves a nonzero entry of minimal degree in the trailing block to (k, k).
  bool bring_min_degree_pivot(std::size_t k) {
    int best = std::numeric_limits<int>::max();
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < n_; ++i) {
      for (std::size_t j = k; j < n_; ++j) {
        const int d = static_cast<int>(w_[i][j].size()) - 1;
        if (d < 0) continue;
        const bool at_pivot = i == k && j == k;
        if (d < best || (d == best && at_pivot)) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best == std::numeric_limits<int>::max()) return false;
    swap_rows(k, bi);
    swap_cols(k, bj);
    return true;
  }

  std::size_t n_;
  double tol_;
  PolyGrid w_;
  PolyGrid e_;
  PolyGrid f_;
};

}  // namespace

SmithForm smith_form(const MatrixPolynomial& p, double tol) {
  double scale = 0.0;
  for (const auto& c : p.coeffs()) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  if (scale == 0.0) throw Error(ErrorKind::IdenticallySingular, "zero matrix polynomial");
  const Poly det = p.determinant();
  if (poly::max_abs(det) <= tol * std::pow(scale, static_cast<double>(p.n()))) {
    throw Error(ErrorKind::IdenticallySingular, "determinant vanishes identically");
  }
  Reducer r(p, tol * scale);
  r.reduce();
  return r.result();
}

}  // namespace torfact
