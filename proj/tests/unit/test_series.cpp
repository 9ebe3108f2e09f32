#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "torfact/error.hpp"
#include "torfact/multi_index.hpp"
#include "torfact/series.hpp"

using namespace torfact;
using torfact::testing::Rng;

namespace {

ScalarSeries chr(std::initializer_list<int> j, Complex c = 1.0) { return ScalarSeries::character(MultiIndex(j), c); }

}  // namespace

TEST_CASE("multi-index order is lexicographic") {
  CHECK(MultiIndex{-1, 5} < MultiIndex{0, -3});
  CHECK(MultiIndex{0, -3} < MultiIndex{0, 0});
  CHECK(MultiIndex{0, 0} < MultiIndex{2, 0});
  CHECK(MultiIndex{1, 2}.lex_sign() == 1);
  CHECK(MultiIndex{0, -2}.lex_sign() == -1);
  CHECK(MultiIndex{0, 0}.lex_sign() == 0);
  CHECK((MultiIndex{1, 2} + MultiIndex{-1, 3}) == MultiIndex{0, 5});
  CHECK(MultiIndex{2, -3}.scaled(-2) == MultiIndex{-4, 6});
  std::ostringstream os;
  os << MultiIndex{1, -2};
  CHECK(os.str() == "(1,-2)");
  CHECK_THROWS_AS(MultiIndex(9), Error);
}

TEST_CASE("characters form a group") {
  const ScalarSeries p = mul(chr({1, 0}), chr({-1, 0}));
  CHECK(p == ScalarSeries::constant(2, 1.0));
}

TEST_CASE("distributivity example") {
  ScalarSeries a = ScalarSeries::constant(2, 2.0) + chr({1, 0});
  const ScalarSeries p = mul(a, chr({0, -1}));
  CHECK(p.size() == 2);
  CHECK(p.coeff(MultiIndex{0, -1}) == Complex(2.0));
  CHECK(p.coeff(MultiIndex{1, -1}) == Complex(1.0));
}

TEST_CASE("mul rejects mixed dimensions") {
  CHECK_THROWS_AS(mul(chr({1}), chr({1, 0})), Error);
  MatrixSeries a(2, 3, 1), b(2, 2, 1);
  CHECK_THROWS_AS(mul(a, b), Error);
}

TEST_CASE("Wiener norm is submultiplicative on random pairs") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const ScalarSeries a = testing::sparse_series(rng, 2, 3, 6);
    const ScalarSeries b = testing::sparse_series(rng, 2, 3, 6);
    CHECK(wiener_norm(mul(a, b)) <= wiener_norm(a) * wiener_norm(b) * (1 + 1e-14));
  }
}

TEST_CASE("ring axioms hold coefficient-exactly") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    // Small integer coefficients keep every sum exact in floating point.
    auto ints = [&] {
      std::uniform_int_distribution<int> d(-4, 4), e(-4, 4);
      ScalarSeries s(2);
      for (int k = 0; k < 6; ++k) s.add_term(MultiIndex{e(rng), e(rng)}, Complex(d(rng), d(rng)));
      return s;
    };
    const ScalarSeries a = ints(), b = ints(), c = ints();
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, b + c) == mul(a, b) + mul(a, c));
    CHECK(mul(a, b) == mul(b, a));
  }
}

TEST_CASE("spectrum and norm") {
  const ScalarSeries a = ScalarSeries::constant(1, 3.0) + chr({2}, -4.0);
  CHECK(spectrum(a) == std::set<MultiIndex>{MultiIndex{0}, MultiIndex{2}});
  CHECK(wiener_norm(a) == doctest::Approx(7.0));
  const ScalarSeries z(2);
  CHECK(spectrum(z).empty());
  CHECK(wiener_norm(z) == 0.0);
}

TEST_CASE("spectrum of a product lies in the Minkowski sum") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const ScalarSeries a = testing::sparse_series(rng, 2, 2, 4);
    const ScalarSeries b = testing::sparse_series(rng, 2, 2, 4);
    std::set<MultiIndex> sum;
    for (const auto& x : spectrum(a)) {
      for (const auto& y : spectrum(b)) sum.insert(x + y);
    }
    for (const auto& j : spectrum(mul(a, b))) CHECK(sum.count(j) == 1);
  }
}

TEST_CASE("lexicographic split") {
  ScalarSeries a(2);
  a.add_term(MultiIndex{-1, 5}, 1.0);
  a.add_term(MultiIndex{0, -3}, 2.0);
  a.add_term(MultiIndex{2, 0}, 3.0);
  const LexSplit s = split_pm(a);
  CHECK(spectrum(s.minus) == std::set<MultiIndex>{MultiIndex{-1, 5}, MultiIndex{0, -3}});
  CHECK(spectrum(s.plus) == std::set<MultiIndex>{MultiIndex{2, 0}});
  CHECK(s.zero == Complex(0.0));

  const LexSplit c = split_pm(ScalarSeries::constant(2, 7.0));
  CHECK(c.zero == Complex(7.0));
  CHECK(c.minus.is_zero());
  CHECK(c.plus.is_zero());
}

TEST_CASE("split is an exact projection triple") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const ScalarSeries a = testing::random_series(rng, 3, 2);
    const LexSplit s = split_pm(a);
    CHECK(s.minus + ScalarSeries::constant(3, s.zero) + s.plus == a);
    for (const auto& j : spectrum(s.minus)) CHECK(j.lex_sign() < 0);
    for (const auto& j : spectrum(s.plus)) CHECK(j.lex_sign() > 0);
    // idempotent
    CHECK(split_pm(s.minus).minus == s.minus);
    CHECK(split_pm(s.plus).plus == s.plus);
    CHECK(split_pm(s.plus).minus.is_zero());
    CHECK(s.plus_with_constant() == s.plus + ScalarSeries::constant(3, s.zero));
  }
}

TEST_CASE("determinant by cofactors") {
  MatrixSeries a(2, 1);
  a(0, 0) = chr({1});
  a(0, 1) = ScalarSeries::constant(1, 1.0);
  a(1, 1) = chr({-1});
  CHECK(det_series(a) == ScalarSeries::constant(1, 1.0));

  Rng rng(2);
  const ScalarSeries x = testing::random_series(rng, 2, 1), y = testing::random_series(rng, 2, 1);
  CHECK(det_series(MatrixSeries::diagonal({x, y})) == mul(x, y));
}

TEST_CASE("conjugate is the pointwise conjugate") {
  const ScalarSeries a = chr({1, 2}, Complex(1, 2));
  const ScalarSeries b = a.conj();
  CHECK(b.coeff(MultiIndex{-1, -2}) == Complex(1, -2));
}

TEST_CASE("matrix helpers") {
  const MatrixSeries id = MatrixSeries::identity(3, 2);
  CHECK(id(1, 1) == ScalarSeries::constant(2, 1.0));
  CHECK(id(0, 1).is_zero());
  CHECK(wiener_norm(id) == 1.0);
  MatrixSeries a(2, 3, 1);
  a(0, 2) = chr({3});
  const MatrixSeries t = transpose(a);
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == chr({3}));
  CHECK(a.degrees() == std::vector<int>{3});
  CHECK(a.term_count() == 1);
}

TEST_CASE("prune drops small terms") {
  ScalarSeries a = chr({1}, 1e-20) + chr({2}, 1.0);
  a.prune(1e-15);
  CHECK(a.size() == 1);
  a.add_term(MultiIndex{2}, -1.0);
  CHECK(a.is_zero());
}
