#include "torfact/factor_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "torfact/error.hpp"
#include "torfact/functional_calc.hpp"

namespace torfact {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxStep = std::numbers::pi / 2.0;
constexpr double kRoundingGap = 0.1;

Complex character_value(const MultiIndex& c, std::span<const double> x) {
  double phase = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) phase += c[i] * x[i];
  return std::polar(1.0, kTwoPi * phase);
}

std::vector<Complex> axis_loop(const SampledMap& f, std::size_t axis) {
  const GridShape& g = f.grid();
  std::vector<Complex> loop(static_cast<std::size_t>(g.size(axis)));
  for (std::size_t i = 0; i < loop.size(); ++i) loop[i] = f.entry(i * g.stride(axis), 0, 0);
  return loop;
}

}  // namespace

double loop_winding(std::span<const Complex> loop, double margin, double* max_step) {
  double total = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Complex a = loop[i];
    const Complex b = loop[(i + 1) % loop.size()];
    if (std::abs(a) <= margin) {
      throw Error(ErrorKind::NearSingular, "|a| = " + std::to_string(std::abs(a)) + " on the loop");
    }
    const double step = std::arg(b / a);
    worst = std::max(worst, std::abs(step));
    total += step;
  }
  if (max_step) *max_step = worst;
  if (worst > kMaxStep) {
    throw Error(ErrorKind::AmbiguousWinding, "phase step " + std::to_string(worst) + " exceeds pi/2; refine the grid");
  }
  const double raw = total / kTwoPi;
  if (std::abs(raw - std::round(raw)) > kRoundingGap) {
    throw Error(ErrorKind::AmbiguousWinding, "raw winding " + std::to_string(raw) + " is not near an integer");
  }
  return raw;
}

LoopWindings winding_vector(const SampledMap& f, double margin) {
  const SampledMap scalar = f.n() == 1 ? f : f.determinant();
  LoopWindings w;
  w.winding = MultiIndex(scalar.dim());
  w.min_modulus = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scalar.node_count(); ++k) w.min_modulus = std::min(w.min_modulus, std::abs(scalar.entry(k, 0, 0)));
  if (w.min_modulus <= margin) {
    throw Error(ErrorKind::NearSingular, "min |det| = " + std::to_string(w.min_modulus) + " <= margin " +
                                             std::to_string(margin));
  }
  for (std::size_t axis = 0; axis < scalar.dim(); ++axis) {
    auto loop = axis_loop(scalar, axis);
    double step = 0.0;
    const double raw = loop_winding(loop, margin, &step);
    w.raw.push_back(raw);
    w.winding[axis] = static_cast<int>(std::lround(raw));
    w.rounding_gap = std::max(w.rounding_gap, std::abs(raw - std::round(raw)));
    w.max_phase_step = std::max(w.max_phase_step, step);
  }
  return w;
}

LoopWindings winding_vector(const ScalarSeries& a, const GridShape& grid, double margin) {
  return winding_vector(evaluate(a, grid), margin);
}

SampledMap continuous_log(const SampledMap& f, std::optional<Complex> base) {
  if (f.n() != 1) throw Error(ErrorKind::DimensionMismatch, "continuous_log takes a scalar map");
  const GridShape& g = f.grid();
  SampledMap out(g, 1);
  const Complex origin = f.entry(0, 0, 0);
  if (origin == Complex{}) throw Error(ErrorKind::NearSingular, "zero sample at the origin");
  out.entry(0, 0, 0) = base.value_or(std::log(origin));
  if (std::abs(std::exp(out.entry(0, 0, 0)) - origin) > 1e-9 * std::max(1.0, std::abs(origin))) {
    throw Error(ErrorKind::InvalidArgument, "base value is not a logarithm of the origin sample");
  }

  auto step_log = [&](std::size_t from, std::size_t to) {
    const Complex ratio = f.entry(to, 0, 0) / f.entry(from, 0, 0);
    if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag()) || ratio == Complex{}) {
      throw Error(ErrorKind::NearSingular, "zero sample at node " + std::to_string(to));
    }
    const Complex l = std::log(ratio);
    if (std::abs(l.imag()) > kMaxStep) {
      throw Error(ErrorKind::PhaseJumpTooLarge, "phase step " + std::to_string(std::abs(l.imag())) + " at node " +
                                                    std::to_string(to));
    }
    return l;
  };

  // Fill axis by axis: first the line through the origin along axis 0, then
  // the plane spanned with axis 1 from that line, and so on.
  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const std::size_t stride = g.stride(axis);
    const int size = g.size(axis);
    // Nodes already filled are those whose coordinates on axes >= axis are zero.
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      auto idx = g.node_index(k);
      bool on_filled = true;
      for (std::size_t a = axis; a < g.dim(); ++a) on_filled = on_filled && idx[a] == 0;
      if (!on_filled) continue;
      std::size_t cur = k;
      for (int s = 1; s < size; ++s) {
        const std::size_t next = cur + stride;
        out.entry(next, 0, 0) = out.entry(cur, 0, 0) + step_log(cur, next);
        cur = next;
      }
    }
  }

  // Wrap-around consistency along every axis at every node.
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    auto idx = g.node_index(k);
    for (std::size_t axis = 0; axis < g.dim(); ++axis) {
      auto nidx = idx;
      nidx[axis] += 1;
      const std::size_t next = g.linear(nidx);
      const Complex expected = step_log(k, next);
      const Complex actual = out.entry(next, 0, 0) - out.entry(k, 0, 0);
      if (std::abs(actual - expected) > 1e-9 * std::max(1.0, std::abs(out.entry(k, 0, 0)))) {
        throw Error(ErrorKind::NonzeroWinding, "logarithm is not single-valued along axis " + std::to_string(axis));
      }
    }
  }
  return out;
}

ScalarFactorization scalar_factorize(const ScalarSeries& a, const GridShape& grid, double tol,
                                     const ScalarFactorOptions& options) {
  if (grid.dim() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "grid and series dimensions differ");
  const LoopWindings w = winding_vector(a, grid, options.margin);
  const MultiIndex c = w.winding;
  double sup_a = 0.0;
  {
    const SampledMap s = evaluate(a, grid);
    for (std::size_t k = 0; k < s.node_count(); ++k) sup_a = std::max(sup_a, std::abs(s.entry(k, 0, 0)));
  }
  // Each factor's error enters the reconstruction multiplied by roughly sup|a|.
  const double part_tol = tol / (4.0 * std::max(1.0, sup_a));

  // b = log|a|, sampled directly; checked against the margin on every refinement.
  auto modulus_sampler = [&](const GridShape& g) {
    SampledMap s = evaluate(a, g);
    for (std::size_t k = 0; k < s.node_count(); ++k) {
      const double m = std::abs(s.entry(k, 0, 0));
      if (m <= options.margin) {
        throw Error(ErrorKind::NearSingular, "|a| = " + std::to_string(m) + " on a refined grid");
      }
      s.entry(k, 0, 0) = std::log(m);
    }
    return s;
  };
  RefinedProjection log_mod = project_to_tolerance(modulus_sampler, grid, part_tol, options.max_nodes);
  ScalarSeries b = log_mod.series(0, 0);

  // u = continuous log of the unimodular, winding-free part a |a|^{-1} <-c,.>
  auto phase_sampler = [&](const GridShape& g) {
    SampledMap s = evaluate(a, g);
    for (std::size_t k = 0; k < s.node_count(); ++k) {
      const Complex v = s.entry(k, 0, 0);
      s.entry(k, 0, 0) = v / std::abs(v) * std::conj(character_value(c, g.coordinates(k)));
    }
    return continuous_log(s);
  };
  // Unwrapping needs steps below kMaxStep; start the projection on the first
  // refinement of grid where that holds.
  GridShape phase_grid = grid;
  while (true) {
    try {
      phase_sampler(phase_grid);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PhaseJumpTooLarge || phase_grid.refined(2).node_count() > options.max_nodes) throw;
      phase_grid = phase_grid.refined(2);
    }
  }
  RefinedProjection u_proj = project_to_tolerance(phase_sampler, phase_grid, part_tol, options.max_nodes);
  ScalarSeries u = u_proj.series(0, 0);

  const MultiIndex zero(a.dim());
  const Complex u_mean = u.coeff(zero);
  u.add_term(zero, -u_mean);
  b.add_term(zero, u_mean);

  const LexSplit bs = split_pm(b);
  const LexSplit us = split_pm(u);
  ScalarFactorization f;
  f.c = c;
  f.b_minus = bs.minus;
  f.b_plus = bs.plus_with_constant();
  f.u_minus = us.minus;
  f.u_plus = us.plus;  // zero slot is empty after removing the mean

  f.verification_grid = log_mod.verification_grid.node_count() >= u_proj.verification_grid.node_count()
                            ? log_mod.verification_grid
                            : u_proj.verification_grid;
  f.residual = sup_distance(reconstruct(f, f.verification_grid), evaluate(a, f.verification_grid));
  if (f.residual > tol) {
    throw Error(ErrorKind::NoConvergence, "reconstruction residual " + std::to_string(f.residual) +
                                              " above tolerance " + std::to_string(tol));
  }
  return f;
}

SampledMap reconstruct(const ScalarFactorization& f, const GridShape& grid) {
  const SampledMap bm = evaluate(f.b_minus, grid);
  const SampledMap um = evaluate(f.u_minus, grid);
  const SampledMap bp = evaluate(f.b_plus, grid);
  const SampledMap up = evaluate(f.u_plus, grid);
  SampledMap out(grid, 1);
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const Complex v = std::exp(bm.entry(k, 0, 0)) * std::exp(um.entry(k, 0, 0)) *
                      character_value(f.c, grid.coordinates(k)) * std::exp(bp.entry(k, 0, 0)) *
                      std::exp(up.entry(k, 0, 0));
    out.entry(k, 0, 0) = v;
  }
  return out;
}

}  // namespace torfact
