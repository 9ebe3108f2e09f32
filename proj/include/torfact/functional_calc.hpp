#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact {

/// Named analytic function applied through the (principal-branch) matrix
/// functional calculus.
struct AnalyticFunction {
  enum class Kind { Sqrt, Log, Exp, Inverse, Power };
  Kind kind = Kind::Exp;
  double exponent = 1.0;  // Power only

  static AnalyticFunction sqrt() { return {Kind::Sqrt}; }
  static AnalyticFunction log() { return {Kind::Log}; }
  static AnalyticFunction exp() { return {Kind::Exp}; }
  static AnalyticFunction inverse() { return {Kind::Inverse}; }
  static AnalyticFunction power(double p) { return {Kind::Power, p}; }

  std::string name() const;
  bool has_branch_cut() const;
};

struct FunctionalCalcOptions {
  /// Required distance between sampled eigenvalues and the forbidden set.
  double min_margin = 1e-6;
  /// Cap on verification-grid size; exceeding it means NoConvergence.
  std::size_t max_nodes = std::size_t{1} << 22;
};

struct FunctionalCalcResult {
  MatrixSeries series{1, 1};
  /// sup over the verification grid of ||series - f(A)||_2
  double sup_error = 0.0;
  /// min distance from sampled eigenvalues to the branch cut (or to 0 for inverse)
  double margin = std::numeric_limits<double>::infinity();
  GridShape grid;
  GridShape verification_grid;
};

/// f applied to every node matrix. Throws SpectrumViolation when an eigenvalue
/// comes within min_margin of the forbidden set; the achieved margin is
/// written to *margin when given.
SampledMap apply_pointwise(const AnalyticFunction& f, const SampledMap& a, double min_margin = 0.0,
                           double* margin = nullptr);

/// Samples f(A) on a grid, projects by truncated Fourier sums and checks the
/// result on a grid of twice the density; the grid doubles until the check
/// meets tol (NoConvergence past options.max_nodes).
FunctionalCalcResult functional_calc(const AnalyticFunction& f, const MatrixSeries& a, const GridShape& grid, double tol,
                                     const FunctionalCalcOptions& options = {});

struct RefinedProjection {
  MatrixSeries series{1, 1};
  double sup_error = 0.0;
  GridShape grid;
  GridShape verification_grid;
};

/// Shared driver: `sampler(grid)` must return samples of one fixed function.
RefinedProjection project_to_tolerance(const std::function<SampledMap(const GridShape&)>& sampler,
                                       const GridShape& grid, double tol, std::size_t max_nodes);

}  // namespace torfact
