#include <doctest.h>

#include "support.hpp"
#include "torfact/error.hpp"
#include "torfact/factor_circle.hpp"
#include "torfact/toeplitz_oracle.hpp"

using namespace torfact;
using torfact::testing::Rng;

namespace {

ScalarSeries z(int e, Complex c = 1.0) { return ScalarSeries::character(MultiIndex{e}, c); }

void check_contract(const MatrixSeries& a, const FactorizationResult& f, double tol) {
  CHECK(f.residual <= tol);
  CHECK(std::is_sorted(f.kappa.rbegin(), f.kappa.rend()));
  CHECK(f.index_sum() == mean_motion(a));
  for (const auto& j : spectrum(f.a_minus)) CHECK(j[0] <= 0);
  for (const auto& j : spectrum(f.a_plus)) CHECK(j[0] >= 0);
  CHECK(f.min_abs_det_minus > 1e-8);
  CHECK(f.min_abs_det_plus > 1e-8);
}

bool is_identity(const MatrixSeries& a) {
  const MatrixSeries d = a - MatrixSeries::identity(a.rows(), 1);
  return wiener_norm(d) < 1e-12;
}

}  // namespace

TEST_CASE("diagonal characters") {
  const MatrixSeries a = MatrixSeries::diagonal({z(2), z(-1)});
  const auto f = wh_factorize(a);
  CHECK(f.kappa == std::vector<int>{2, -1});
  CHECK(is_identity(f.a_minus));
  CHECK(is_identity(f.a_plus));
  check_contract(a, f, 1e-12);
  CHECK(mean_motion(a) == 1);
  CHECK(toeplitz_indices_oracle(a) == std::vector<int>{2, -1});
}

TEST_CASE("triangular example is canonical") {
  MatrixSeries a(2, 1);
  a(0, 0) = z(1);
  a(0, 1) = z(0);
  a(1, 1) = z(-1);
  const auto f = wh_factorize(a);
  CHECK(f.kappa == std::vector<int>{0, 0});
  check_contract(a, f, 1e-12);
  CHECK(toeplitz_indices_oracle(a) == std::vector<int>{0, 0});

  // The factors from the hand computation also reproduce A.
  MatrixSeries m(2, 1), p(2, 1);
  m(0, 0) = z(0);
  m(1, 0) = z(-1);
  m(1, 1) = z(0);
  p(0, 0) = z(1);
  p(0, 1) = z(0);
  p(1, 0) = z(0, -1.0);
  CHECK(mul(m, p) == a);
}

TEST_CASE("unimodular polynomial matrix") {
  MatrixSeries a(2, 1);
  a(0, 0) = z(0);
  a(0, 1) = z(2, 3.0) + z(1);
  a(1, 1) = z(0);
  const auto f = wh_factorize(a);
  CHECK(f.kappa == std::vector<int>{0, 0});
  CHECK(is_identity(f.a_minus));
  check_contract(a, f, 1e-12);
}

TEST_CASE("scalar multiples of the identity") {
  for (int j : {-2, 0, 3}) {
    const MatrixSeries a = MatrixSeries::diagonal({z(j), z(j), z(j)});
    CHECK(mean_motion(a) == 3 * j);
    CHECK(wh_factorize(a).kappa == std::vector<int>{j, j, j});
  }
}

TEST_CASE("oracle on small cases") {
  CHECK(toeplitz_indices_oracle(MatrixSeries::diagonal({z(1), z(-1)})) == std::vector<int>{1, -1});
  CHECK(toeplitz_indices_oracle(MatrixSeries::identity(3, 1)) == std::vector<int>{0, 0, 0});
  const OracleReport r = toeplitz_oracle(MatrixSeries::diagonal({z(1), z(-1)}));
  CHECK(r.bulk_level > 1e3 * r.kernel_level);
}

TEST_CASE("random Laurent symbols agree with the oracle") {
  Rng rng(73);
  int done = 0;
  for (int t = 0; t < 40 && done < 12; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
    const MatrixSeries a = testing::random_laurent(rng, n, 1 + t % 2, 1 + (t / 2) % 2);
    FactorizationResult f;
    try {
      f = wh_factorize(a);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NearSingular) continue;
      throw;
    }
    check_contract(a, f, 1e-8);
    CHECK(toeplitz_indices_oracle(a) == f.kappa);
    ++done;
  }
  CHECK(done >= 10);
}

TEST_CASE("non-canonical planted indices") {
  // A = L diag(z^2, 1, z^-1) U with L minus-type, U plus-type unimodular.
  MatrixSeries l = MatrixSeries::identity(3, 1), u = MatrixSeries::identity(3, 1);
  l(1, 0) = z(-1, 0.5);
  l(2, 1) = z(-2, -0.3);
  u(0, 2) = z(1, 0.7);
  u(1, 0) = z(2, 0.2) + z(0, 0.1);
  const MatrixSeries a = mul(mul(l, MatrixSeries::diagonal({z(2), z(0), z(-1)})), u);
  const auto f = wh_factorize(a);
  CHECK(f.kappa == std::vector<int>{2, 0, -1});
  check_contract(a, f, 1e-10);
  CHECK(toeplitz_indices_oracle(a) == f.kappa);
}

TEST_CASE("det roots on the circle are rejected") {
  const MatrixSeries a = MatrixSeries::diagonal({z(1) - z(0), z(0)});
  try {
    wh_factorize(a);
    FAIL("expected NearSingular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearSingular);
  }
  CHECK_THROWS_AS(mean_motion(a), Error);
}

TEST_CASE("regularization") {
  // diag(z - 1, 1)
  const MatrixPolynomial p = MatrixPolynomial::from_entries({{Poly{-1.0, 1.0}, Poly{}}, {Poly{}, Poly{1.0}}});
  const Regularization r = regularize(p, 0.1);
  CHECK(r.changed);
  CHECK(r.perturbation <= 0.1);
  CHECK(r.min_abs_det > 0.0);
  CHECK(r.root_margin >= 1e-6);
  CHECK(r.degree <= p.degree());

  const MatrixPolynomial good = MatrixPolynomial::from_entries({{Poly{2.0, 1.0}, Poly{}}, {Poly{}, Poly{1.0}}});
  const Regularization same = regularize(good, 0.1);
  CHECK_FALSE(same.changed);
  CHECK(coefficient_distance(same.output, good) == 0.0);

  const Regularization zero = regularize(MatrixPolynomial(2), 0.1);
  CHECK(zero.changed);
  CHECK(std::abs(zero.shift) == doctest::Approx(0.05));
  CHECK(zero.min_abs_det == doctest::Approx(0.0025));
}
