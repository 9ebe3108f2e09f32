#pragma once

#include <string>

#include "torfact/multi_index.hpp"
#include "torfact/sampling.hpp"

namespace torfact {

/// X = X1 X2 X3 on T^3 with
///   X3(x) = X(x1, 0, x3)
///   X2(x) = X(0, x2, x3) X(0, 0, x3)^{-1}
///   X1(x) = X(x) X(x1, 0, x3)^{-1} X(0, 0, x3) X(0, x2, x3)^{-1}
struct Torus3Decomposition {
  SampledMap x1;
  SampledMap x2;
  SampledMap x3;
};

/// Requires X unitary (within unitary_tol) and X = I on {x3 = 0} (within
/// slice_tol). Throws NotUnitary, NotNormalizedOnSubtorus.
Torus3Decomposition torus3_decompose(const SampledMap& x, double unitary_tol = 1e-9, double slice_tol = 1e-9);

/// X(x) X(x1, x2, 0)^H: the input made trivial on {x3 = 0}.
SampledMap slice_normalize(const SampledMap& x);

struct Pi3Degree {
  double raw = 0.0;
  int m = 0;
  /// |raw - m|
  double gap = 0.0;
};

/// Degree of the S^3 part of a unitary map T^3 -> U_n: the cubic trace
/// integral -(1/24 pi^2) int eps^{abc} tr(A_a A_b A_c), A_a = X1^H d_a X1,
/// on the X1 factor of the slice-normalized input. Derivatives are
/// fourth-order central differences on the periodic grid. Throws NotUnitary,
/// GridTooCoarse when the rounding gap exceeds max_gap.
Pi3Degree pi3_degree(const SampledMap& x, double max_gap = 0.1, double unitary_tol = 1e-8);

/// Integral only, on a map already of X1 type (no decomposition, no checks).
double cubic_trace_integral(const SampledMap& x);

struct ComponentDescriptor {
  int m = 0;
  MultiIndex w;
  double m_raw = 0.0;
  double m_gap = 0.0;
  /// max rounding gap of the det windings
  double w_gap = 0.0;
  /// min |det X| over the grid
  double det_margin = 0.0;

  bool operator==(const ComponentDescriptor& o) const { return m == o.m && w == o.w; }
  std::string to_string() const;
};

/// w = det windings along the three coordinate loops; m = pi3 degree of the
/// unitarized map. Throws NearSingular, AmbiguousWinding, GridTooCoarse.
ComponentDescriptor component_descriptor(const SampledMap& x, double margin = 1e-6, double max_gap = 0.1);

struct Certificate {
  enum class Verdict { InFactorSubgroup, Obstructed };
  Verdict verdict = Verdict::InFactorSubgroup;
  /// candidate diag(1, ..., 1, <j, .>) for InFactorSubgroup
  MultiIndex j;
  /// nonzero degree for Obstructed
  int m = 0;
  ComponentDescriptor evidence;
  GridShape grid;

  std::string to_string() const;
};

/// m = 0: the component contains diag(1, ..., 1, <w, .>). m != 0: the
/// component misses the closed subgroup generated by factorable elements.
/// Throws Inconclusive when the degree is not within max_gap of an integer.
Certificate obstruction_certificate(const SampledMap& x, double margin = 1e-6, double max_gap = 0.1);

}  // namespace torfact
