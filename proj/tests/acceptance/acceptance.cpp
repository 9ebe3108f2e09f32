// One [PASS]/[FAIL] line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "support.hpp"
#include "torfact/error.hpp"
#include "torfact/factor_circle.hpp"
#include "torfact/factor_scalar.hpp"
#include "torfact/functional_calc.hpp"
#include "torfact/invariants.hpp"
#include "torfact/toeplitz_oracle.hpp"
#include "torfact/witness.hpp"

using namespace torfact;
using torfact::testing::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = seconds_since(t0);
  if (!out.pass) ++failures;
  std::printf("[%s] %d %s: %s(%.1f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.str().c_str(), secs);
  std::fflush(stdout);
}

SampledMap diag_character(std::size_t n, const MultiIndex& j, const GridShape& g) {
  std::vector<ScalarSeries> d(n, ScalarSeries::constant(3, 1.0));
  d.back() = ScalarSeries::character(j);
  return evaluate(MatrixSeries::diagonal(d), g);
}

ScalarSeries exp_series(const ScalarSeries& s) {
  return functional_calc(AnalyticFunction::exp(), MatrixSeries::from_scalar(s), GridShape({32, 32}), 1e-11)
      .series(0, 0);
}

double identity_distance_on_subtori(const SampledMap& x) {
  const GridShape& g = x.grid();
  const MatrixXc id = MatrixXc::Identity(static_cast<Eigen::Index>(x.n()), static_cast<Eigen::Index>(x.n()));
  double m = 0.0;
  for (std::size_t k = 0; k < x.node_count(); ++k) {
    const auto idx = g.node_index(k);
    if (idx[0] == 0 || idx[1] == 0 || idx[2] == 0) m = std::max(m, (x.at(k) - id).cwiseAbs().maxCoeff());
  }
  return m;
}

Poly random_poly(Rng& rng, int degree) {
  Poly p;
  for (int i = 0; i <= degree; ++i) p.push_back(testing::random_complex(rng));
  return p;
}

MatrixPolynomial random_matrix_poly(Rng& rng, std::size_t n, int degree) {
  std::vector<std::vector<Poly>> e(n, std::vector<Poly>(n));
  for (auto& row : e)
    for (auto& p : row) p = random_poly(rng, degree);
  return MatrixPolynomial::from_entries(e);
}

}  // namespace

int main() {
  criterion(1, "witness degree", [](Outcome& out) {
    const GridShape g = GridShape::cube(3, 32);
    double worst_gap = 0.0, slowest = 0.0;
    for (int n : {2, 3}) {
      for (int m : {-2, -1, 0, 1, 2, 3}) {
        const auto t0 = Clock::now();
        const Pi3Degree d = pi3_degree(build_witness(n, m, g));
        const double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        worst_gap = std::max(worst_gap, std::abs(d.raw - m));
        if (std::abs(d.raw - m) > 0.05 || d.m != m)
          out.fail("n=" + std::to_string(n) + " m=" + std::to_string(m) + " raw=" + std::to_string(d.raw));
        if (secs >= 60.0) out.fail("run took " + std::to_string(secs) + " s");
      }
    }
    out.detail << "12 runs at 32^3, max |raw - m| = " << worst_gap << ", slowest run " << slowest << " s ";
  });

  criterion(2, "obstruction certificate", [](Outcome& out) {
    const GridShape wg = GridShape::cube(3, 32);
    for (int m : {-2, -1, 1, 2, 3}) {
      const Certificate c = obstruction_certificate(build_witness(2, m, wg));
      if (c.verdict != Certificate::Verdict::Obstructed || c.m != m)
        out.fail("witness m=" + std::to_string(m) + " gave " + c.to_string());
    }
    // Four nodes per period of the steepest character keep phase steps below pi/2.
    const GridShape g = GridShape::cube(3, 24);
    int count = 0;
    for (int a = -5; a <= 5; ++a) {
      for (int b = -5; b <= 5; ++b) {
        for (int c = -5; c <= 5; ++c) {
          const MultiIndex j{a, b, c};
          const Certificate cert = obstruction_certificate(diag_character(2, j, g));
          ++count;
          if (cert.verdict != Certificate::Verdict::InFactorSubgroup || !(cert.j == j))
            out.fail("j=" + j.to_string() + " gave " + cert.to_string());
        }
      }
    }
    out.detail << "5 witnesses obstructed, " << count << " diagonal characters in the factor subgroup ";
  });

  criterion(3, "identity-component invariance", [](Outcome& out) {
    Rng rng(3001);
    const GridShape g = GridShape::cube(3, 32);
    const SampledMap w = build_witness(2, 1, g);
    const ComponentDescriptor base = component_descriptor(w);
    double worst_gap = 0.0;
    for (int t = 0; t < 20; ++t) {
      const MatrixSeries h = testing::random_anti_hermitian(rng, 2, 3, 1 + t % 2, 1.0);
      const SampledMap e = apply_pointwise(AnalyticFunction::exp(), evaluate(h, g));
      const ComponentDescriptor d = component_descriptor(t % 2 ? e * w : w * e);
      worst_gap = std::max(worst_gap, d.m_gap);
      if (!(d == base)) out.fail("trial " + std::to_string(t) + " gave " + d.to_string());
    }
    out.detail << "20 trials keep " << base.to_string() << ", max rounding gap " << worst_gap << " ";
  });

  criterion(4, "circle factorization", [](Outcome& out) {
    Rng rng(4001);
    const auto t0 = Clock::now();
    double worst = 0.0;
    int agree = 0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      const MatrixSeries a = testing::random_laurent(rng, n, t % 4, 1 + (t / 4) % 3);
      const FactorizationResult f = wh_factorize(a);
      worst = std::max(worst, f.residual);
      if (f.residual > 1e-8) out.fail("case " + std::to_string(t) + " residual " + std::to_string(f.residual));
      if (f.index_sum() != mean_motion(a)) out.fail("case " + std::to_string(t) + " index sum differs from winding");
      if (f.kappa == toeplitz_indices_oracle(a))
        ++agree;
      else
        out.fail("case " + std::to_string(t) + " disagrees with the Toeplitz oracle");
    }
    const double secs = seconds_since(t0);
    if (secs >= 120.0) out.fail("total " + std::to_string(secs) + " s");
    out.detail << "50 cases, max residual " << worst << ", oracle agreement " << agree << "/50 ";
  });

  criterion(5, "scalar factorization on T^2", [](Outcome& out) {
    Rng rng(5001);
    std::uniform_int_distribution<int> cd(-3, 3);
    double worst = 0.0;
    for (int t = 0; t < 25; ++t) {
      const MultiIndex c{cd(rng), cd(rng)};
      const ScalarSeries b = testing::random_series(rng, 2, 2, 0.15);
      const ScalarSeries u = testing::random_series(rng, 2, 2, 0.15);
      const ScalarSeries a = mul(mul(exp_series(b), ScalarSeries::character(c)), exp_series(u));
      const ScalarFactorization f = scalar_factorize(a, GridShape({32, 32}), 1e-8);
      const std::string tag = "case " + std::to_string(t);
      worst = std::max(worst, f.residual);
      if (!(f.c == c)) out.fail(tag + " recovered " + f.c.to_string());
      if (f.residual > 1e-8) out.fail(tag + " residual " + std::to_string(f.residual));
      for (const auto& j : spectrum(f.b_minus))
        if (j.lex_sign() >= 0) out.fail(tag + " b_minus holds " + j.to_string());
      for (const auto& j : spectrum(f.u_minus))
        if (j.lex_sign() >= 0) out.fail(tag + " u_minus holds " + j.to_string());
      for (const auto& j : spectrum(f.b_plus))
        if (j.lex_sign() < 0) out.fail(tag + " b_plus holds " + j.to_string());
      for (const auto& j : spectrum(f.u_plus))
        if (j.lex_sign() <= 0) out.fail(tag + " u_plus holds " + j.to_string());
    }
    out.detail << "25 planted symbols, max residual " << worst << " ";
  });

  criterion(6, "regularization of singular symbols", [](Outcome& out) {
    Rng rng(6001);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    double worst = 0.0, worst_shift = 0.0;
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      // U(z) diag(z - e^{i theta}, 1, ...) V(z) vanishes at e^{i theta}.
      std::vector<Poly> d(n, Poly{1.0});
      d[0] = Poly{-std::polar(1.0, angle(rng)), 1.0};
      std::vector<std::vector<Poly>> e(n, std::vector<Poly>(n));
      for (std::size_t i = 0; i < n; ++i) e[i][i] = d[i];
      const MatrixPolynomial p =
          random_matrix_poly(rng, n, t % 2) * MatrixPolynomial::from_entries(e) * random_matrix_poly(rng, n, 1);
      if (circle_root_margin(p) > 1e-6) out.fail("case " + std::to_string(t) + " is not singular on the circle");
      const Regularization r = regularize(p, 1e-2);
      worst_shift = std::max(worst_shift, r.perturbation);
      if (r.perturbation > 1e-2) out.fail("case " + std::to_string(t) + " moved by " + std::to_string(r.perturbation));
      if (!(r.min_abs_det > 0.0)) out.fail("case " + std::to_string(t) + " is still singular");
      const FactorizationResult f = wh_factorize(r.output.to_series());
      worst = std::max(worst, f.residual);
      if (f.residual > 1e-8) out.fail("case " + std::to_string(t) + " residual " + std::to_string(f.residual));
    }
    out.detail << "10 cases, max perturbation " << worst_shift << ", max residual " << worst << " ";
  });

  criterion(7, "T^3 decomposition", [](Outcome& out) {
    Rng rng(7001);
    double worst_rec = 0.0, worst_id = 0.0;
    for (int t = 0; t < 10; ++t) {
      const GridShape g({8 + t % 3, 9, 10 - t % 2});
      const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      const SampledMap x = slice_normalize(unitarize(evaluate(testing::random_matrix_series(rng, n, 3, 2), g)));
      const Torus3Decomposition d = torus3_decompose(x);
      worst_rec = std::max(worst_rec, testing::max_abs_diff(d.x1 * d.x2 * d.x3, x));
      worst_id = std::max(worst_id, identity_distance_on_subtori(d.x1));
    }
    if (worst_rec > 1e-12) out.fail("reconstruction error " + std::to_string(worst_rec));
    if (worst_id > 1e-12) out.fail("X1 off identity by " + std::to_string(worst_id));
    out.detail << "10 inputs, reconstruction " << worst_rec << ", X1 - I on subtori " << worst_id << " ";
  });

  criterion(8, "approximation robustness", [](Outcome& out) {
    const GridShape g = GridShape::cube(3, 64);
    int coarse = 0, fine = 0;
    for (Summation s : {Summation::Fejer, Summation::Dirichlet}) {
      for (int degree : {6, 8, 10, 12}) {
        const std::string tag =
            std::string(s == Summation::Fejer ? "Fejer" : "Dirichlet") + " D=" + std::to_string(degree);
        WitnessApproximation w;
        try {
          w = witness_series(2, 1, degree, g, s);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::ApproximationTooCoarse) continue;
          throw;
        }
        if (w.sup_error < 0.5) {
          ++coarse;
          const ComponentDescriptor d = component_descriptor(evaluate(w.series, g));
          if (d.m != 1 || !(d.w == MultiIndex{0, 0, 0})) out.fail(tag + " descriptor " + d.to_string());
        }
        if (w.sup_error < 0.1) {
          ++fine;
          if (w.min_singular_value <= 0.9) out.fail(tag + " min singular value " + std::to_string(w.min_singular_value));
        }
        out.detail << tag << " sup " << w.sup_error << " smin " << w.min_singular_value << "; ";
      }
    }
    if (coarse == 0) out.fail("no approximant with sup-error < 0.5");
    if (fine == 0) out.fail("no approximant with sup-error < 0.1");
  });

  return failures == 0 ? 0 : 1;
}
