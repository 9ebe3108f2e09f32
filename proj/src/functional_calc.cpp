#include "torfact/functional_calc.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "torfact/error.hpp"
#include "torfact/parallel.hpp"

namespace torfact {

namespace {

bool is_integer(double p) { return std::floor(p) == p && std::abs(p) < 1e9; }

// Distance from z to the closed negative real axis (-inf, 0].
double distance_to_cut(Complex z) { return z.real() > 0.0 ? std::abs(z) : std::abs(z.imag()); }

double eigen_margin(const AnalyticFunction& f, const MatrixXc& m) {
  const bool cut = f.has_branch_cut();
  const bool zero_only = f.kind == AnalyticFunction::Kind::Inverse ||
                         (f.kind == AnalyticFunction::Kind::Power && is_integer(f.exponent) && f.exponent < 0);
  if (!cut && !zero_only) return std::numeric_limits<double>::infinity();
  auto score = [&](Complex z) {
    if (cut) return distance_to_cut(z);
    return std::abs(z);
  };
  if (m.rows() == 1) return score(m(0, 0));
  Eigen::ComplexEigenSolver<MatrixXc> es(m, false);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) best = std::min(best, score(es.eigenvalues()(i)));
  return best;
}

// Largest magnitude t such that all coefficients with |c| <= t sum to at
// most budget; -1 when even the smallest one does not fit.
double prune_threshold(const ScalarSeries& s, double budget) {
  std::vector<double> mags;
  mags.reserve(s.size());
  for (const auto& kv : s.terms()) mags.push_back(std::abs(kv.second));
  std::sort(mags.begin(), mags.end());
  double total = 0.0;
  double threshold = -1.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    total += mags[i];
    if (total > budget) break;
    if (i + 1 == mags.size() || mags[i + 1] > mags[i]) threshold = mags[i];
  }
  return threshold;
}

MatrixXc integer_power(const MatrixXc& m, long p) {
  MatrixXc base = p < 0 ? MatrixXc(m.inverse()) : m;
  unsigned long e = static_cast<unsigned long>(p < 0 ? -p : p);
  MatrixXc acc = MatrixXc::Identity(m.rows(), m.cols());
  while (e) {
    if (e & 1UL) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

MatrixXc apply_one(const AnalyticFunction& f, const MatrixXc& m) {
  using K = AnalyticFunction::Kind;
  if (m.rows() == 1) {
    const Complex z = m(0, 0);
    Complex v;
    switch (f.kind) {
      case K::Sqrt: v = std::sqrt(z); break;
      case K::Log: v = std::log(z); break;
      case K::Exp: v = std::exp(z); break;
      case K::Inverse: v = 1.0 / z; break;
      case K::Power: v = is_integer(f.exponent) ? integer_power(m, static_cast<long>(f.exponent))(0, 0)
                                                : std::pow(z, f.exponent); break;
    }
    MatrixXc r(1, 1);
    r(0, 0) = v;
    return r;
  }
  switch (f.kind) {
    case K::Sqrt: return m.sqrt();
    case K::Log: return m.log();
    case K::Exp: return m.exp();
    case K::Inverse: return m.inverse();
    case K::Power:
      if (is_integer(f.exponent)) return integer_power(m, static_cast<long>(f.exponent));
      return m.pow(f.exponent);
  }
  return m;
}

}  // namespace

std::string AnalyticFunction::name() const {
  switch (kind) {
    case Kind::Sqrt: return "sqrt";
    case Kind::Log: return "log";
    case Kind::Exp: return "exp";
    case Kind::Inverse: return "inverse";
    case Kind::Power: return "power(" + std::to_string(exponent) + ")";
  }
  return "?";
}

bool AnalyticFunction::has_branch_cut() const {
  return kind == Kind::Sqrt || kind == Kind::Log || (kind == Kind::Power && !is_integer(exponent));
}

SampledMap apply_pointwise(const AnalyticFunction& f, const SampledMap& a, double min_margin, double* margin) {
  SampledMap out(a.grid(), a.n());
  std::vector<double> node_margin(a.node_count());
  parallel_for(a.node_count(), [&](std::size_t k) {
    const MatrixXc m = a.at(k);
    node_margin[k] = eigen_margin(f, m);
    out.at(k) = apply_one(f, m);
  });
  const double worst = node_margin.empty() ? std::numeric_limits<double>::infinity()
                                           : *std::min_element(node_margin.begin(), node_margin.end());
  if (margin) *margin = worst;
  if (worst <= min_margin) {
    throw Error(ErrorKind::SpectrumViolation, f.name() + ": sampled eigenvalues within " + std::to_string(worst) +
                                                  " of the forbidden set (required > " +
                                                  std::to_string(min_margin) + ")");
  }
  for (std::size_t k = 0; k < out.node_count(); ++k) {
    if (!out.at(k).allFinite()) throw Error(ErrorKind::SpectrumViolation, f.name() + ": non-finite value");
  }
  return out;
}

RefinedProjection project_to_tolerance(const std::function<SampledMap(const GridShape&)>& sampler,
                                       const GridShape& grid, double tol, std::size_t max_nodes) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  GridShape current = grid;
  double last_error = std::numeric_limits<double>::infinity();
  while (true) {
    const GridShape verify = current.refined(2);
    if (verify.node_count() > max_nodes) {
      throw Error(ErrorKind::NoConvergence, "sup-error " + std::to_string(last_error) + " above tolerance " +
                                                std::to_string(tol) + " at the node cap");
    }
    const SampledMap samples = sampler(current);
    int degree = std::numeric_limits<int>::max();
    for (int s : current.sizes()) degree = std::min(degree, (s - 1) / 2);
    Projection p = fejer_project(samples, degree, Summation::Dirichlet);

    // Drop the smallest coefficients of each entry while their total stays
    // within 1e-3 tol / n, so the pruned map moves by at most 1e-3 tol.
    const double budget = 1e-3 * tol / static_cast<double>(std::max<std::size_t>(1, p.series.rows()));
    for (std::size_t r = 0; r < p.series.rows(); ++r) {
      for (std::size_t c = 0; c < p.series.cols(); ++c) p.series(r, c).prune(prune_threshold(p.series(r, c), budget));
    }

    last_error = sup_distance(evaluate(p.series, verify), sampler(verify));
    if (last_error <= tol) return {std::move(p.series), last_error, current, verify};
    current = verify;
  }
}

FunctionalCalcResult functional_calc(const AnalyticFunction& f, const MatrixSeries& a, const GridShape& grid, double tol,
                                     const FunctionalCalcOptions& options) {
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "functional calculus needs a square matrix");
  if (grid.dim() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "grid and series dimensions differ");
  double margin = std::numeric_limits<double>::infinity();
  auto sampler = [&](const GridShape& g) {
    double m = 0.0;
    SampledMap out = apply_pointwise(f, evaluate(a, g), options.min_margin, &m);
    margin = std::min(margin, m);
    return out;
  };
  RefinedProjection p = project_to_tolerance(sampler, grid, tol, options.max_nodes);
  return {std::move(p.series), p.sup_error, margin, p.grid, p.verification_grid};
}

}  // namespace torfact
