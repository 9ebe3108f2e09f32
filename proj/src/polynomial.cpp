#include "torfact/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torfact/error.hpp"

namespace torfact {

namespace poly {

Poly trim(Poly p, double tol) {
  while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
  return p;
}

int degree(const Poly& p) { return static_cast<int>(trim(p).size()) - 1; }

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trim(std::move(r));
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return trim(std::move(r));
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trim(std::move(r));
}

Poly scale(const Poly& a, Complex s) {
  Poly r = a;
  for (auto& c : r) c *= s;
  return trim(std::move(r));
}

Poly shift(const Poly& a, int k) {
  if (a.empty()) return {};
  Poly r(static_cast<std::size_t>(k), Complex{});
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den, double tol) {
  const Poly d = trim(den, tol);
  if (d.empty()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  Poly r = trim(num);
  const int dd = static_cast<int>(d.size()) - 1;
  if (static_cast<int>(r.size()) - 1 < dd) return {Poly{}, r};
  Poly q(r.size() - d.size() + 1);
  for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
    const Complex coef = r[k] / d.back();
    q[k - dd] = coef;
    for (int i = 0; i <= dd; ++i) r[k - dd + i] -= coef * d[i];
    r[k] = Complex{};
  }
  r.resize(static_cast<std::size_t>(dd));
  return {trim(std::move(q)), trim(std::move(r))};
}

Complex eval(const Poly& p, Complex z) {
  Complex acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double max_abs(const Poly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

std::vector<Complex> roots(const Poly& p_in) {
  const Poly p = trim(p_in);
  const int d = static_cast<int>(p.size()) - 1;
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "roots of the zero polynomial");
  std::vector<Complex> out;
  // Exact zeros first.
  std::size_t lead_zero = 0;
  while (lead_zero < p.size() && p[lead_zero] == Complex{}) ++lead_zero;
  out.assign(lead_zero, Complex{});
  const Poly q(p.begin() + static_cast<std::ptrdiff_t>(lead_zero), p.end());
  const int m = static_cast<int>(q.size()) - 1;
  if (m <= 0) return out;
  MatrixXc companion = MatrixXc::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -q[i] / q.back();
  Eigen::ComplexEigenSolver<MatrixXc> es(companion, false);
  Poly dq(q.size() - 1);
  for (std::size_t i = 1; i < q.size(); ++i) dq[i - 1] = q[i] * static_cast<double>(i);
  for (int i = 0; i < m; ++i) {
    Complex z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const Complex f = eval(q, z);
      const Complex df = eval(dq, z);
      if (df == Complex{}) break;
      const Complex step = f / df;
      if (!(std::abs(step) < 1e-3 * std::max(1.0, std::abs(z)))) break;
      z -= step;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace poly

MatrixPolynomial::MatrixPolynomial(std::size_t n, std::vector<MatrixXc> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (static_cast<std::size_t>(c.rows()) != n_ || static_cast<std::size_t>(c.cols()) != n_) {
      throw Error(ErrorKind::DimensionMismatch, "matrix polynomial coefficient has the wrong size");
    }
  }
  while (!coeffs_.empty() && coeffs_.back().isZero(0.0)) coeffs_.pop_back();
}

MatrixPolynomial MatrixPolynomial::identity(std::size_t n) {
  return MatrixPolynomial(n, {MatrixXc::Identity(n, n)});
}

MatrixPolynomial MatrixPolynomial::from_entries(const std::vector<std::vector<Poly>>& entries) {
  const std::size_t n = entries.size();
  std::size_t len = 0;
  for (const auto& row : entries) {
    if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "entries must be square");
    for (const auto& p : row) len = std::max(len, p.size());
  }
  std::vector<MatrixXc> coeffs(len, MatrixXc::Zero(n, n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < entries[r][c].size(); ++k) coeffs[k](r, c) = entries[r][c][k];
    }
  }
  return MatrixPolynomial(n, std::move(coeffs));
}

MatrixPolynomial MatrixPolynomial::from_series(const MatrixSeries& a) {
  if (a.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "matrix polynomials live on the circle (k = 1)");
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "matrix polynomials are square");
  const std::size_t n = a.rows();
  int top = -1;
  for (const auto& j : spectrum(a)) {
    if (j[0] < 0) throw Error(ErrorKind::InvalidArgument, "series has negative powers of z");
    top = std::max(top, j[0]);
  }
  std::vector<MatrixXc> coeffs(static_cast<std::size_t>(top + 1), MatrixXc::Zero(n, n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [j, v] : a(r, c).terms()) coeffs[static_cast<std::size_t>(j[0])](r, c) = v;
    }
  }
  return MatrixPolynomial(n, std::move(coeffs));
}

MatrixSeries MatrixPolynomial::to_series() const {
  MatrixSeries s(n_, 1);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < n_; ++c) s(r, c).add_term(MultiIndex{static_cast<int>(k)}, coeffs_[k](r, c));
    }
  }
  return s;
}

MatrixXc MatrixPolynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return MatrixXc::Zero(n_, n_);
  return coeffs_[static_cast<std::size_t>(k)];
}

Poly MatrixPolynomial::entry(std::size_t r, std::size_t c) const {
  Poly p(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) p[k] = coeffs_[k](r, c);
  return poly::trim(std::move(p));
}

std::vector<std::vector<Poly>> MatrixPolynomial::entries() const {
  std::vector<std::vector<Poly>> e(n_, std::vector<Poly>(n_));
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) e[r][c] = entry(r, c);
  }
  return e;
}

MatrixXc MatrixPolynomial::eval(Complex z) const {
  MatrixXc acc = MatrixXc::Zero(n_, n_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> MatrixPolynomial::eigenvalues() const {
  const int d = degree();
  if (d < 1) return {};
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  const Poly det = poly::trim(determinant(), 1e-13 * std::pow(scale, static_cast<double>(n_)));
  const int finite = static_cast<int>(det.size()) - 1;
  if (finite < 1) return {};

  // z = s + 1/w turns P into w^d P(s + 1/w) with leading coefficient P(s).
  Complex s{};
  double best = -1.0;
  for (int k = 0; k < 16; ++k) {
    const Complex cand = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 16.0);
    Eigen::JacobiSVD<MatrixXc> svd(eval(cand));
    const double smin = svd.singularValues()(static_cast<Eigen::Index>(n_) - 1);
    if (smin > best) {
      best = smin;
      s = cand;
    }
  }
  // Coefficient of w^j: sum_k P_k binom(k, i) s^i with i = j - d + k.
  const auto dd = static_cast<std::size_t>(d);
  std::vector<MatrixXc> m(dd + 1, MatrixXc::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_)));
  for (int k = 0; k <= d; ++k) {
    double binom = 1.0;
    Complex sp = 1.0;
    for (int i = 0; i <= k; ++i) {
      m[static_cast<std::size_t>(d - k + i)] += coeffs_[static_cast<std::size_t>(k)] * (binom * sp);
      binom = binom * (k - i) / (i + 1);
      sp *= s;
    }
  }
  const Eigen::PartialPivLU<MatrixXc> lead(m[dd]);
  const auto nn = static_cast<Eigen::Index>(n_);
  const Eigen::Index size = nn * d;
  MatrixXc comp = MatrixXc::Zero(size, size);
  for (Eigen::Index b = 0; b + 1 < d; ++b) comp.block(b * nn, (b + 1) * nn, nn, nn).setIdentity();
  for (int j = 0; j < d; ++j) comp.block((d - 1) * nn, j * nn, nn, nn) = -lead.solve(m[static_cast<std::size_t>(j)]);
  Eigen::ComplexEigenSolver<MatrixXc> eig(comp, false);
  std::vector<Complex> w(eig.eigenvalues().begin(), eig.eigenvalues().end());
  // The deg(det) largest |w| are the finite eigenvalues; the rest sit at w = 0.
  std::sort(w.begin(), w.end(), [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  std::vector<Complex> out;
  for (int i = 0; i < finite && i < static_cast<int>(w.size()); ++i) out.push_back(s + 1.0 / w[static_cast<std::size_t>(i)]);
  return out;
}

Poly MatrixPolynomial::determinant() const {
  if (coeffs_.empty()) return {};
  const ScalarSeries d = det_series(to_series());
  int top = -1;
  for (const auto& kv : d.terms()) top = std::max(top, kv.first[0]);
  Poly p(static_cast<std::size_t>(top + 1));
  for (const auto& [j, v] : d.terms()) p[static_cast<std::size_t>(j[0])] = v;
  return poly::trim(std::move(p));
}

MatrixPolynomial MatrixPolynomial::trimmed(double tol) const {
  std::vector<MatrixXc> c = coeffs_;
  while (!c.empty() && c.back().cwiseAbs().maxCoeff() <= tol) c.pop_back();
  return MatrixPolynomial(n_, std::move(c));
}

MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  if (a.n_ != b.n_) throw Error(ErrorKind::DimensionMismatch, "matrix polynomial sizes differ");
  if (a.coeffs_.empty() || b.coeffs_.empty()) return MatrixPolynomial(a.n_);
  std::vector<MatrixXc> c(a.coeffs_.size() + b.coeffs_.size() - 1, MatrixXc::Zero(a.n_, a.n_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j].noalias() += a.coeffs_[i] * b.coeffs_[j];
  }
  return MatrixPolynomial(a.n_, std::move(c));
}

MatrixPolynomial operator+(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  if (a.n_ != b.n_) throw Error(ErrorKind::DimensionMismatch, "matrix polynomial sizes differ");
  std::vector<MatrixXc> c(std::max(a.coeffs_.size(), b.coeffs_.size()), MatrixXc::Zero(a.n_, a.n_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return MatrixPolynomial(a.n_, std::move(c));
}

MatrixPolynomial operator-(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  if (a.n_ != b.n_) throw Error(ErrorKind::DimensionMismatch, "matrix polynomial sizes differ");
  std::vector<MatrixXc> c(std::max(a.coeffs_.size(), b.coeffs_.size()), MatrixXc::Zero(a.n_, a.n_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return MatrixPolynomial(a.n_, std::move(c));
}

double coefficient_distance(const MatrixPolynomial& a, const MatrixPolynomial& b) {
  const MatrixPolynomial d = a - b;
  double m = 0.0;
  for (const auto& c : d.coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace torfact
