#include "torfact/factor_circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "torfact/error.hpp"
#include "torfact/factor_scalar.hpp"

namespace torfact {

namespace {

double max_coeff(const MatrixPolynomial& p) {
  double m = 0.0;
  for (const auto& c : p.coeffs()) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

double sigma_min_ratio(const MatrixXc& m) {
  Eigen::JacobiSVD<MatrixXc> svd(m);
  const auto& s = svd.singularValues();
  return s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0);
}

// Extracts one root r of det R inside the disk: R = T^H diag(z - r, 1, ..., 1) R'.
// Returns the left factor T^H diag(z - r, 1, ...) and replaces R by R'.
MatrixPolynomial deflate_root(MatrixPolynomial& r_poly, Complex root, double scale) {
  const std::size_t n = r_poly.n();
  Eigen::JacobiSVD<MatrixXc> svd(r_poly.eval(root), Eigen::ComputeFullU);
  const MatrixXc& u = svd.matrixU();
  MatrixXc t(n, n);
  t.row(0) = u.col(n - 1).adjoint();
  for (std::size_t i = 0; i + 1 < n; ++i) t.row(i + 1) = u.col(i).adjoint();

  std::vector<MatrixXc> coeffs;
  for (const auto& c : r_poly.coeffs()) coeffs.push_back(t * c);
  MatrixPolynomial tr(n, coeffs);

  const Poly divisor{-root, 1.0};
  std::vector<std::vector<Poly>> entries = tr.entries();
  for (std::size_t c = 0; c < n; ++c) {
    auto [q, rem] = poly::divmod(entries[0][c], divisor);
    if (poly::max_abs(rem) > 1e-6 * std::max(1.0, scale)) {
      throw Error(ErrorKind::NoConvergence, "root deflation left remainder " + std::to_string(poly::max_abs(rem)));
    }
    entries[0][c] = q;
  }
  r_poly = MatrixPolynomial::from_entries(entries);
  // Keep the size even if trailing coefficients vanish.
  if (r_poly.n() != n) r_poly = MatrixPolynomial(n);

  std::vector<MatrixXc> left(2, MatrixXc::Zero(n, n));
  const MatrixXc th = t.adjoint();
  // T^H diag(z - r, 1, ..., 1) = T^H (D0 + z D1)
  left[0] = th;
  left[0].col(0) *= -root;
  left[1].col(0) = th.col(0);
  return MatrixPolynomial(n, left);
}

struct ColumnReduction {
  std::vector<std::vector<Poly>> reduced;  // M U
  std::vector<std::vector<Poly>> u_inverse;
  std::vector<int> degrees;
};

int column_degree(const std::vector<std::vector<Poly>>& m, std::size_t col, double tol) {
  int d = -1;
  for (const auto& row : m) d = std::max(d, static_cast<int>(poly::trim(row[col], tol).size()) - 1);
  return d;
}

ColumnReduction column_reduce(const MatrixPolynomial& m_poly, int target_degree, double rel_tol) {
  const std::size_t n = m_poly.n();
  ColumnReduction out;
  out.reduced = m_poly.entries();
  for (auto& row : out.reduced) row.resize(n);
  out.u_inverse.assign(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i) out.u_inverse[i][i] = Poly{1.0};
  auto& m = out.reduced;

  const double tol = rel_tol * std::max(1.0, max_coeff(m_poly));
  auto degrees = [&] {
    std::vector<int> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = column_degree(m, j, tol);
    return d;
  };
  auto truncate_column = [&](std::size_t j, int deg) {
    for (auto& row : m) {
      row[j].resize(static_cast<std::size_t>(std::max(0, deg + 1)));
      row[j] = poly::trim(row[j]);
    }
  };

  std::vector<int> d = degrees();
  for (std::size_t j = 0; j < n; ++j) truncate_column(j, d[j]);
  for (int iter = 0; std::accumulate(d.begin(), d.end(), 0) > target_degree; ++iter) {
    if (iter > 64 * static_cast<int>(n) + 4 * target_degree) {
      throw Error(ErrorKind::NoConvergence, "column reduction did not terminate");
    }
    for (int dj : d) {
      if (dj < 0) throw Error(ErrorKind::NoConvergence, "column reduction produced a zero column");
    }
    MatrixXc h(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const Poly& p = m[r][c];
        h(r, c) = static_cast<int>(p.size()) > d[c] ? p[static_cast<std::size_t>(d[c])] : Complex{};
      }
    }
    Eigen::JacobiSVD<MatrixXc> svd(h, Eigen::ComputeFullV);
    const Eigen::VectorXcd alpha = svd.matrixV().col(n - 1);
    const double cutoff = 1e-8 * alpha.cwiseAbs().maxCoeff();
    std::size_t jstar = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(alpha(j)) <= cutoff) continue;
      if (jstar == n || d[j] > d[jstar] || (d[j] == d[jstar] && std::abs(alpha(j)) > std::abs(alpha(jstar)))) {
        jstar = j;
      }
    }
    // col_j* += sum_i (alpha_i / alpha_j*) z^{d_j* - d_i} col_i
    std::vector<Poly> coef(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == jstar || std::abs(alpha(i)) <= cutoff) continue;
      coef[i] = poly::shift(Poly{alpha(i) / alpha(jstar)}, d[jstar] - d[i]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      Poly acc = m[r][jstar];
      for (std::size_t i = 0; i < n; ++i) {
        if (!coef[i].empty()) acc = poly::add(acc, poly::mul(coef[i], m[r][i]));
      }
      m[r][jstar] = acc;
    }
    // U^{-1} <- E^{-1} U^{-1} with E^{-1} = I - sum_i coef_i e_i e_j*^T: row_i -= coef_i row_j*.
    for (std::size_t i = 0; i < n; ++i) {
      if (coef[i].empty()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        out.u_inverse[i][c] = poly::sub(out.u_inverse[i][c], poly::mul(coef[i], out.u_inverse[jstar][c]));
      }
    }
    const int before = d[jstar];
    d = degrees();
    if (d[jstar] >= before) {
      throw Error(ErrorKind::NoConvergence, "column reduction step did not lower the degree");
    }
    truncate_column(jstar, d[jstar]);
  }
  // Column reduced: the highest-degree coefficient matrix must be nonsingular.
  MatrixXc h(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Poly& p = m[r][c];
      h(r, c) = d[c] >= 0 && static_cast<int>(p.size()) > d[c] ? p[static_cast<std::size_t>(d[c])] : Complex{};
    }
  }
  if (sigma_min_ratio(h) < 1e-12) throw Error(ErrorKind::NoConvergence, "column reduction ended singular");
  out.degrees = d;
  return out;
}

MatrixSeries scalar_diag_power(const std::vector<int>& exps) {
  std::vector<ScalarSeries> d;
  for (int e : exps) d.push_back(ScalarSeries::character(MultiIndex{e}));
  return MatrixSeries::diagonal(d);
}

double min_abs_det_on_grid(const MatrixSeries& a, int grid) {
  const SampledMap det = evaluate(a, GridShape({grid})).determinant();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < det.node_count(); ++k) m = std::min(m, std::abs(det.entry(k, 0, 0)));
  return m;
}

}  // namespace

MatrixSeries FactorizationResult::middle() const { return scalar_diag_power(kappa); }

MatrixSeries FactorizationResult::product() const { return mul(mul(a_minus, middle()), a_plus); }

int FactorizationResult::index_sum() const { return std::accumulate(kappa.begin(), kappa.end(), 0); }

double circle_root_margin(const MatrixPolynomial& p) {
  const Poly det = poly::trim(p.determinant(), 1e-14 * std::pow(std::max(1.0, max_coeff(p)), p.n()));
  if (det.empty()) return 0.0;
  double m = std::numeric_limits<double>::infinity();
  for (const Complex& r : p.eigenvalues()) m = std::min(m, std::abs(std::abs(r) - 1.0));
  return m;
}

FactorizationResult wh_factorize(const MatrixSeries& a, int grid, double tol, const CircleFactorOptions& options) {
  if (a.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "circle factorization needs k = 1");
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "factorization needs a square matrix");
  if (grid < 8) throw Error(ErrorKind::InvalidArgument, "verification grid must have at least 8 points");
  const std::size_t n = a.rows();
  const auto support = spectrum(a);
  if (support.empty()) throw Error(ErrorKind::NearSingular, "zero symbol");
  const int shift = -support.begin()->operator[](0);

  const MatrixSeries shifted = mul(MatrixSeries::diagonal(std::vector<ScalarSeries>(
                                       n, ScalarSeries::character(MultiIndex{shift}))),
                                   a);
  MatrixPolynomial r_poly = MatrixPolynomial::from_series(shifted);
  const double scale = std::max(1.0, max_coeff(r_poly));

  const Poly det = poly::trim(r_poly.determinant(), 1e-14 * std::pow(scale, static_cast<double>(n)));
  if (det.empty()) throw Error(ErrorKind::NearSingular, "determinant vanishes identically");
  int inside = 0;
  double root_margin = std::numeric_limits<double>::infinity();
  for (const Complex& r : r_poly.eigenvalues()) {
    const double dist = std::abs(r) - 1.0;
    root_margin = std::min(root_margin, std::abs(dist));
    if (std::abs(dist) <= options.root_margin) {
      throw Error(ErrorKind::NearSingular, "det has a root at distance " + std::to_string(std::abs(dist)) +
                                               " from the unit circle");
    }
    if (dist < 0) ++inside;
  }

  MatrixPolynomial m_poly = MatrixPolynomial::identity(n);
  for (int step = 0; step < inside; ++step) {
    std::vector<Complex> candidates;
    if (sigma_min_ratio(r_poly.eval(0.0)) <= 1e-12) candidates.push_back(0.0);
    if (candidates.empty()) {
      for (const Complex& r : r_poly.eigenvalues()) {
        if (std::abs(r) < 1.0) candidates.push_back(r);
      }
    }
    if (candidates.empty()) throw Error(ErrorKind::NoConvergence, "lost track of a root inside the disk");
    Complex best = candidates.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (const Complex& r : candidates) {
      const double s = sigma_min_ratio(r_poly.eval(r));
      if (s < best_score) {
        best_score = s;
        best = r;
      }
    }
    m_poly = m_poly * deflate_root(r_poly, best, scale);
  }

  ColumnReduction cr = column_reduce(m_poly, inside, options.trim_tol);

  // A = z^{-shift} M R = (M U diag(z^{-d})) diag(z^{d - shift}) (U^{-1} R)
  MatrixSeries a_minus(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Poly& p = cr.reduced[r][c];
      for (std::size_t k = 0; k < p.size(); ++k) {
        a_minus(r, c).add_term(MultiIndex{static_cast<int>(k) - cr.degrees[c]}, p[k]);
      }
    }
  }
  const MatrixSeries a_plus_unsorted = mul(MatrixPolynomial::from_entries(cr.u_inverse).to_series(), r_poly.to_series());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return cr.degrees[x] > cr.degrees[y];
  });

  FactorizationResult res;
  res.a_minus = MatrixSeries(n, 1);
  res.a_plus = MatrixSeries(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    res.kappa.push_back(cr.degrees[order[k]] - shift);
    for (std::size_t r = 0; r < n; ++r) res.a_minus(r, k) = a_minus(r, order[k]);
    for (std::size_t c = 0; c < n; ++c) res.a_plus(k, c) = a_plus_unsorted(order[k], c);
  }

  // Normalize A_minus(infinity) by its block-diagonal part over groups of equal
  // indices; such constants commute with the middle factor.
  MatrixXc c_inf(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) c_inf(r, c) = res.a_minus(r, c).coeff(MultiIndex{0});
  }
  MatrixXc block = MatrixXc::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (res.kappa[r] == res.kappa[c]) block(r, c) = c_inf(r, c);
    }
  }
  if (sigma_min_ratio(block) > 1e-8) {
    const MatrixXc inv = block.inverse();
    MatrixSeries inv_s(n, 1), blk_s(n, 1);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        inv_s(r, c).add_term(MultiIndex{0}, inv(r, c));
        blk_s(r, c).add_term(MultiIndex{0}, block(r, c));
      }
    }
    res.a_minus = mul(res.a_minus, inv_s);
    res.a_plus = mul(blk_s, res.a_plus);
    // Clean round-off on the now-identity constant term.
    const double clean = 1e-14 * std::max(1.0, wiener_norm(res.a_minus));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        res.a_minus(r, c).prune(clean);
        res.a_plus(r, c).prune(1e-14 * std::max(1.0, wiener_norm(res.a_plus)));
      }
    }
  }

  res.root_margin = root_margin;
  res.verification_grid = grid;
  const SampledMap diff = evaluate(res.product() - a, GridShape({grid}));
  double worst = 0.0;
  for (std::size_t k = 0; k < diff.node_count(); ++k) worst = std::max(worst, diff.at(k).cwiseAbs().maxCoeff());
  res.residual = worst;
  res.min_abs_det_minus = min_abs_det_on_grid(res.a_minus, grid);
  res.min_abs_det_plus = min_abs_det_on_grid(res.a_plus, grid);
  if (res.residual > tol) {
    throw Error(ErrorKind::NoConvergence, "reconstruction residual " + std::to_string(res.residual) +
                                              " above tolerance " + std::to_string(tol));
  }
  return res;
}

int mean_motion(const MatrixSeries& a, int grid, double margin) {
  if (a.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "mean motion on the circle needs k = 1");
  return winding_vector(det_series(a), GridShape({grid}), margin).winding[0];
}

Regularization regularize(const MatrixPolynomial& p, double eps, double margin) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const std::size_t n = p.n();
  constexpr int kGrid = 1024;
  auto finish = [&](MatrixPolynomial out, Complex delta, double root_margin) {
    Regularization r;
    r.output = std::move(out);
    r.shift = delta;
    r.changed = delta != Complex{};
    r.perturbation = coefficient_distance(r.output, p);
    r.root_margin = root_margin;
    r.degree = r.output.degree();
    r.min_abs_det = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGrid; ++k) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / kGrid);
      r.min_abs_det = std::min(r.min_abs_det, std::abs(r.output.eval(z).determinant()));
    }
    return r;
  };

  const double own = p.degree() < 0 ? 0.0 : circle_root_margin(p);
  if (own >= margin) return finish(p, Complex{}, own);

  Complex best_delta{};
  double best_margin = -1.0;
  MatrixPolynomial best_out(n);
  for (int k = 0; k < 16; ++k) {
    const Complex delta = std::polar(eps / 2.0, 2.0 * std::numbers::pi * k / 16.0);
    const MatrixPolynomial candidate = p + MatrixPolynomial(n, {delta * MatrixXc::Identity(n, n)});
    const double m = circle_root_margin(candidate);
    if (m > best_margin) {
      best_margin = m;
      best_delta = delta;
      best_out = candidate;
    }
  }
  return finish(best_out, best_delta, best_margin);
}

}  // namespace torfact
