#include "torfact/toeplitz_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "torfact/error.hpp"
#include "torfact/parallel.hpp"
#include "torfact/polynomial.hpp"

namespace torfact {

namespace {

constexpr double kKernelLevel = 1e-6;
constexpr int kMaxBlocks = 400;

struct Band {
  int lo = 0;
  int hi = 0;
};

Band band_of(const MatrixSeries& a) {
  const auto support = spectrum(a);
  return {support.begin()->operator[](0), support.rbegin()->operator[](0)};
}

// Columns 0..N-1 of T(z^{-k} A) with every block row they touch, so that
// R x = T(z^{-k} A) x exactly for x supported in the first N blocks. Unlike the
// square section this has no spurious small singular values from the tail.
MatrixXc section(const MatrixSeries& a, const Band& band, int blocks, int k) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  const int rows = blocks + std::max(0, band.hi - k);
  MatrixXc t = MatrixXc::Zero(n * rows, n * blocks);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      for (const auto& [j, v] : a(r, c).terms()) {
        const int d = j[0] - k;  // block row - block column
        for (int col = std::max(0, -d); col < blocks; ++col) {
          t(n * (col + d) + static_cast<Eigen::Index>(r), n * col + static_cast<Eigen::Index>(c)) = v;
        }
      }
    }
  }
  return t;
}

struct KernelCount {
  int dim = 0;
  double kernel_level = 0.0;
  double bulk_level = 1.0;
};

KernelCount kernel_count(const MatrixXc& t, double scale) {
  Eigen::BDCSVD<MatrixXc> svd(t);
  const auto& s = svd.singularValues();  // descending
  KernelCount out;
  for (Eigen::Index i = s.size() - 1; i >= 0; --i) {
    if (s(i) > kKernelLevel * scale) {
      out.bulk_level = s(i) / scale;
      break;
    }
    out.kernel_level = s(i) / scale;
    ++out.dim;
  }
  return out;
}

int choose_blocks(const MatrixSeries& a, const Band& band) {
  std::vector<std::vector<Poly>> entries(a.rows(), std::vector<Poly>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      Poly p(static_cast<std::size_t>(band.hi - band.lo + 1));
      for (const auto& [j, v] : a(r, c).terms()) p[static_cast<std::size_t>(j[0] - band.lo)] = v;
      entries[r][c] = poly::trim(p);
    }
  }
  const MatrixPolynomial p = MatrixPolynomial::from_entries(entries);
  if (poly::trim(p.determinant()).empty()) throw Error(ErrorKind::NearSingular, "determinant vanishes identically");
  double rho = 0.0;
  for (const Complex& r : p.eigenvalues()) {
    const double m = std::abs(r);
    if (std::abs(m - 1.0) <= 1e-8) throw Error(ErrorKind::NearSingular, "det root on the unit circle");
    rho = std::max(rho, m < 1.0 ? m : 1.0 / m);
  }
  const int width = band.hi - band.lo;
  const int decay = rho > 0.0 ? static_cast<int>(std::ceil(std::log(1e-10) / std::log(rho))) : 0;
  const int need = std::max(4 * std::max(width, 1), decay) + 2 * (width + 2);
  return std::min(need, kMaxBlocks);
}

}  // namespace

OracleReport toeplitz_oracle(const MatrixSeries& a, int sections) {
  if (a.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "Toeplitz oracle needs k = 1");
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "Toeplitz oracle needs a square symbol");
  if (spectrum(a).empty()) throw Error(ErrorKind::NearSingular, "zero symbol");
  const Band band = band_of(a);
  const int blocks = sections > 0 ? sections : choose_blocks(a, band);
  const int n = static_cast<int>(a.rows());

  // Indices lie in [lo, hi]; f(k) is needed for k in [lo - 1, hi + 1].
  const int k0 = band.lo - 1;
  const int count = band.hi - band.lo + 3;
  double scale = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) scale = std::max(scale, wiener_norm(a(r, c)));
  }
  scale *= n;

  std::vector<KernelCount> small(static_cast<std::size_t>(count)), large(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(2 * count), [&](std::size_t item) {
    const int idx = static_cast<int>(item % static_cast<std::size_t>(count));
    const int nb = item < static_cast<std::size_t>(count) ? blocks : 2 * blocks;
    const KernelCount kc = kernel_count(section(a, band, nb, k0 + idx), scale);
    (item < static_cast<std::size_t>(count) ? small : large)[static_cast<std::size_t>(idx)] = kc;
  });

  OracleReport report;
  report.sections = blocks;
  report.bulk_level = 1.0;
  for (int i = 0; i < count; ++i) {
    const auto& s = small[static_cast<std::size_t>(i)];
    const auto& l = large[static_cast<std::size_t>(i)];
    if (s.dim != l.dim) {
      throw Error(ErrorKind::UnstableSections, "kernel dimension at shift " + std::to_string(k0 + i) + " is " +
                                                   std::to_string(s.dim) + " for N = " + std::to_string(blocks) +
                                                   " but " + std::to_string(l.dim) + " for 2N");
    }
    report.kernel_level = std::max({report.kernel_level, s.kernel_level, l.kernel_level});
    report.bulk_level = std::min({report.bulk_level, s.bulk_level, l.bulk_level});
  }

  // g(v) = f(v + 1) - f(v) = #{kappa_i <= v}
  auto f = [&](int k) { return small[static_cast<std::size_t>(k - k0)].dim; };
  if (f(k0) != 0 || f(k0 + 1) != 0) {
    throw Error(ErrorKind::UnstableSections, "kernel below the lowest admissible index");
  }
  int previous = 0;
  for (int v = band.lo; v <= band.hi; ++v) {
    const int g = f(v + 1) - f(v);
    if (g < previous) throw Error(ErrorKind::UnstableSections, "kernel dimensions are not convex in the shift");
    for (int i = previous; i < g; ++i) report.kappa.push_back(v);
    previous = g;
  }
  if (static_cast<int>(report.kappa.size()) != n) {
    throw Error(ErrorKind::UnstableSections, "kernel jumps account for " + std::to_string(report.kappa.size()) +
                                                 " of " + std::to_string(n) + " indices");
  }
  std::sort(report.kappa.rbegin(), report.kappa.rend());
  return report;
}

std::vector<int> toeplitz_indices_oracle(const MatrixSeries& a, int sections) {
  return toeplitz_oracle(a, sections).kappa;
}

}  // namespace torfact
