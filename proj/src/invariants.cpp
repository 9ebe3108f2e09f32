#include "torfact/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "torfact/error.hpp"
#include "torfact/factor_scalar.hpp"
#include "torfact/parallel.hpp"

namespace torfact {

namespace {

void require_torus3(const SampledMap& x) {
  if (x.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "expected samples on T^3");
}

void require_unitary(const SampledMap& x, double tol) {
  const double defect = unitarity_defect(x);
  if (!(defect <= tol)) throw Error(ErrorKind::NotUnitary, "unitarity defect " + std::to_string(defect));
}

std::size_t node_at(const GridShape& g, int i, int j, int k) {
  const std::array<int, 3> idx{i, j, k};
  return g.linear(idx);
}

}  // namespace

SampledMap slice_normalize(const SampledMap& x) {
  require_torus3(x);
  const GridShape& g = x.grid();
  SampledMap out(g, x.n());
  parallel_for(static_cast<std::size_t>(g.size(0)), [&](std::size_t a) {
    const int i = static_cast<int>(a);
    for (int j = 0; j < g.size(1); ++j) {
      const MatrixXc base = x.at(node_at(g, i, j, 0)).adjoint();
      for (int k = 0; k < g.size(2); ++k) {
        const std::size_t node = node_at(g, i, j, k);
        out.at(node) = x.at(node) * base;
      }
    }
  });
  return out;
}

Torus3Decomposition torus3_decompose(const SampledMap& x, double unitary_tol, double slice_tol) {
  require_torus3(x);
  require_unitary(x, unitary_tol);
  const GridShape& g = x.grid();
  const std::size_t n = x.n();
  const MatrixXc id = MatrixXc::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double slice = 0.0;
  for (int i = 0; i < g.size(0); ++i) {
    for (int j = 0; j < g.size(1); ++j) {
      slice = std::max(slice, (x.at(node_at(g, i, j, 0)) - id).cwiseAbs().maxCoeff());
    }
  }
  if (!(slice <= slice_tol)) {
    throw Error(ErrorKind::NotNormalizedOnSubtorus, "distance to I on {x3 = 0} is " + std::to_string(slice));
  }

  Torus3Decomposition d{SampledMap(g, n), SampledMap(g, n), SampledMap(g, n)};
  parallel_for(static_cast<std::size_t>(g.size(0)), [&](std::size_t a) {
    const int i = static_cast<int>(a);
    for (int j = 0; j < g.size(1); ++j) {
      for (int k = 0; k < g.size(2); ++k) {
        const std::size_t node = node_at(g, i, j, k);
        const auto x_i0k = x.at(node_at(g, i, 0, k));
        const auto x_00k = x.at(node_at(g, 0, 0, k));
        const auto x_0jk = x.at(node_at(g, 0, j, k));
        // Inverses of unitary samples are adjoints.
        d.x3.at(node) = x_i0k;
        d.x2.at(node) = x_0jk * x_00k.adjoint();
        d.x1.at(node) = x.at(node) * x_i0k.adjoint() * x_00k * x_0jk.adjoint();
      }
    }
  });
  return d;
}

double cubic_trace_integral(const SampledMap& x) {
  require_torus3(x);
  const GridShape& g = x.grid();
  const std::array<int, 3> sizes{g.size(0), g.size(1), g.size(2)};
  std::vector<double> slab(static_cast<std::size_t>(sizes[0]), 0.0);

  parallel_for(slab.size(), [&](std::size_t a) {
    const int i = static_cast<int>(a);
    double acc = 0.0;
    std::array<MatrixXc, 3> conn;
    for (int j = 0; j < sizes[1]; ++j) {
      for (int k = 0; k < sizes[2]; ++k) {
        const std::array<int, 3> at{i, j, k};
        const auto xh = x.at(g.linear(at)).adjoint();
        for (int axis = 0; axis < 3; ++axis) {
          auto shifted = [&](int s) {
            std::array<int, 3> p = at;
            p[axis] += s;
            return x.at(g.linear(p));
          };
          const double h = 1.0 / sizes[axis];
          const MatrixXc deriv = (8.0 * (shifted(1) - shifted(-1)) - (shifted(2) - shifted(-2))) / (12.0 * h);
          conn[axis] = xh * deriv;
        }
        // eps^{abc} tr(A_a A_b A_c) = 3 tr(A_1 [A_2, A_3])
        const MatrixXc comm = conn[1] * conn[2] - conn[2] * conn[1];
        acc += 3.0 * (conn[0] * comm).trace().real();
      }
    }
    slab[a] = acc;
  });

  double total = 0.0;
  for (double v : slab) total += v;
  const double volume = 1.0 / static_cast<double>(g.node_count());
  return -total * volume / (24.0 * std::numbers::pi * std::numbers::pi);
}

Pi3Degree pi3_degree(const SampledMap& x, double max_gap, double unitary_tol) {
  require_torus3(x);
  require_unitary(x, unitary_tol);
  const Torus3Decomposition d = torus3_decompose(slice_normalize(x), unitary_tol, 1e-9);
  Pi3Degree out;
  out.raw = cubic_trace_integral(d.x1);
  out.m = static_cast<int>(std::lround(out.raw));
  out.gap = std::abs(out.raw - out.m);
  if (out.gap > max_gap) {
    throw Error(ErrorKind::GridTooCoarse, "degree integral " + std::to_string(out.raw) + " is " +
                                              std::to_string(out.gap) + " from the nearest integer");
  }
  return out;
}

std::string ComponentDescriptor::to_string() const {
  std::ostringstream os;
  os << "(m=" << m << ", w=" << w << ")";
  return os.str();
}

ComponentDescriptor component_descriptor(const SampledMap& x, double margin, double max_gap) {
  require_torus3(x);
  ComponentDescriptor out;
  const LoopWindings lw = winding_vector(x, margin);
  out.w = lw.winding;
  out.w_gap = lw.rounding_gap;
  out.det_margin = lw.min_modulus;
  const Pi3Degree p = pi3_degree(unitarize(x), max_gap);
  out.m = p.m;
  out.m_raw = p.raw;
  out.m_gap = p.gap;
  return out;
}

std::string Certificate::to_string() const {
  std::ostringstream os;
  if (verdict == Verdict::Obstructed) {
    os << "Obstructed(" << m << ")";
  } else {
    os << "InFactorSubgroup(" << j << ")";
  }
  return os.str();
}

Certificate obstruction_certificate(const SampledMap& x, double margin, double max_gap) {
  Certificate c;
  c.grid = x.grid();
  try {
    c.evidence = component_descriptor(x, margin, max_gap);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::GridTooCoarse) throw Error(ErrorKind::Inconclusive, e.what());
    throw;
  }
  if (c.evidence.m != 0) {
    c.verdict = Certificate::Verdict::Obstructed;
    c.m = c.evidence.m;
  } else {
    c.verdict = Certificate::Verdict::InFactorSubgroup;
    c.j = c.evidence.w;
  }
  return c;
}

}  // namespace torfact
