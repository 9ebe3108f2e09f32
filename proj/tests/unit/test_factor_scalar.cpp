#include <doctest.h>

#include <numbers>

#include "support.hpp"
#include "torfact/error.hpp"
#include "torfact/factor_scalar.hpp"
#include "torfact/functional_calc.hpp"

using namespace torfact;
using torfact::testing::Rng;

namespace {

ScalarSeries chr(std::initializer_list<int> j, Complex c = 1.0) { return ScalarSeries::character(MultiIndex(j), c); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::Usage;
}

// exp of a scalar series through the functional calculus (accurate to ~1e-13).
ScalarSeries exp_series(const ScalarSeries& s, const GridShape& g) {
  return functional_calc(AnalyticFunction::exp(), MatrixSeries::from_scalar(s), g, 1e-11).series(0, 0);
}

}  // namespace

TEST_CASE("winding of characters and constants") {
  const GridShape g({16, 16});
  CHECK(winding_vector(chr({3, -2}), g).winding == MultiIndex{3, -2});
  CHECK(winding_vector(ScalarSeries::constant(2, 5.0), g).winding == MultiIndex{0, 0});
  const ScalarSeries a = mul(ScalarSeries::constant(2, 2.0) + chr({1, 0}), chr({0, -1}));
  const LoopWindings w = winding_vector(a, g);
  CHECK(w.winding == MultiIndex{0, -1});
  CHECK(w.rounding_gap < 1e-12);
}

TEST_CASE("winding failures") {
  // 1 + <e1> vanishes at x1 = 1/2.
  CHECK(kind_of([] { winding_vector(ScalarSeries::constant(1, 1.0) + chr({1}), GridShape({8})); }) ==
        ErrorKind::NearSingular);
  // Eight samples of <5> step by 5/8 of a turn.
  CHECK(kind_of([] { winding_vector(chr({5}), GridShape({8})); }) == ErrorKind::AmbiguousWinding);
}

TEST_CASE("winding is additive and blind to exponentials") {
  Rng rng(53);
  const GridShape g({24, 24});
  for (int t = 0; t < 5; ++t) {
    const ScalarSeries a = mul(ScalarSeries::constant(2, 3.0) + testing::sparse_series(rng, 2, 1, 3, 0.3), chr({1, 2}));
    const ScalarSeries b = mul(ScalarSeries::constant(2, 3.0) + testing::sparse_series(rng, 2, 1, 3, 0.3), chr({-2, 1}));
    CHECK(winding_vector(mul(a, b), g).winding == winding_vector(a, g).winding + winding_vector(b, g).winding);
    const ScalarSeries e = exp_series(testing::random_series(rng, 2, 1, 0.3), g);
    CHECK(winding_vector(mul(a, e), g).winding == winding_vector(a, g).winding);
  }
}

TEST_CASE("continuous log") {
  const GridShape g({12, 10});
  SampledMap e_const = evaluate(ScalarSeries::constant(2, std::numbers::e), g);
  const SampledMap one = continuous_log(e_const);
  for (std::size_t k = 0; k < one.node_count(); ++k) CHECK(std::abs(one.entry(k, 0, 0) - 1.0) < 1e-14);

  Rng rng(59);
  const ScalarSeries u = testing::random_series(rng, 2, 2, 0.1);
  const SampledMap f = evaluate(exp_series(u, GridShape({32, 32})), g);
  const SampledMap lg = continuous_log(f);
  const SampledMap want = evaluate(u, g);
  // Planted log differs by a constant 2 pi i k.
  const Complex shift = lg.entry(0, 0, 0) - want.entry(0, 0, 0);
  CHECK(std::abs(shift.real()) < 1e-9);
  const double turns = shift.imag() / (2 * std::numbers::pi);
  CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  for (std::size_t k = 0; k < lg.node_count(); ++k) CHECK(std::abs(lg.entry(k, 0, 0) - want.entry(k, 0, 0) - shift) < 1e-9);

  CHECK(kind_of([&] { continuous_log(evaluate(chr({1, 0}), g)); }) == ErrorKind::NonzeroWinding);
}

TEST_CASE("factorization of a character") {
  const auto f = scalar_factorize(chr({2, -1}), GridShape({16, 16}), 1e-10);
  CHECK(f.c == MultiIndex{2, -1});
  CHECK(f.b_minus.is_zero());
  CHECK(f.u_minus.is_zero());
  CHECK(f.u_plus.is_zero());
  CHECK(wiener_norm(f.b_plus) < 1e-14);
  CHECK(f.residual <= 1e-10);
}

TEST_CASE("factorization of a constant") {
  const auto f = scalar_factorize(ScalarSeries::constant(2, 2.0), GridShape({8, 8}), 1e-12);
  CHECK(f.c == MultiIndex{0, 0});
  CHECK(std::abs(f.b_plus.coeff(MultiIndex{0, 0}) - std::log(2.0)) < 1e-14);
  CHECK(f.b_plus.size() == 1);
  CHECK(f.b_minus.is_zero());
  CHECK(f.u_minus.is_zero());
  CHECK(f.u_plus.is_zero());
}

TEST_CASE("planted scalar factorizations are recovered") {
  Rng rng(61);
  const GridShape fine({32, 32});
  for (int t = 0; t < 4; ++t) {
    const MultiIndex c{static_cast<int>(t % 3) - 1, 2 - t};
    const ScalarSeries b = testing::random_series(rng, 2, 2, 0.15);
    const ScalarSeries u = testing::random_series(rng, 2, 2, 0.15);
    const ScalarSeries a = mul(mul(exp_series(b, fine), chr({c[0], c[1]})), exp_series(u, fine));
    const auto f = scalar_factorize(a, GridShape({16, 16}), 1e-8);
    CHECK(f.c == c);
    CHECK(f.residual <= 1e-8);
    for (const auto& j : spectrum(f.b_minus)) CHECK(j.lex_sign() < 0);
    for (const auto& j : spectrum(f.u_minus)) CHECK(j.lex_sign() < 0);
    for (const auto& j : spectrum(f.b_plus)) CHECK(j.lex_sign() >= 0);
    for (const auto& j : spectrum(f.u_plus)) CHECK(j.lex_sign() > 0);
    CHECK(sup_distance(reconstruct(f, GridShape({40, 40})), evaluate(a, GridShape({40, 40}))) <= 1e-8);
  }
}
