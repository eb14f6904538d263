#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "phifloor/aux_sums.hpp"
#include "phifloor/big_rational.hpp"

using namespace phifloor;

namespace {

// Σ_{N<n<=2N} w(n) ψ(x/(n+δ)) in exact rationals with gcd-count totients.
BigRational exact_frak_S(u64 x, u64 n, int delta, bool weighted) {
  BigRational s = 0;
  for (u64 m = n + 1; m <= 2 * n; ++m) {
    const u64 q = m + static_cast<u64>(delta);
    const BigRational psi = big_fraction(static_cast<i64>(2 * (x % q)) - static_cast<i64>(q), static_cast<i64>(2 * q));
    const auto phi = static_cast<i64>(oracle::totient_by_gcd(m));
    s += weighted ? BigRational(big_fraction(phi, static_cast<i64>(m)) * psi) : BigRational(phi * psi);
  }
  return s;
}

}  // namespace

TEST_CASE("frak_S examples") {
  const AccurateSum a = frak_S({10, 2, 0, true});
  CHECK(a.value() == doctest::Approx(-1.0 / 9).epsilon(1e-15));
  CHECK(a.term_count() == 2);
  CHECK(frak_S({10, 2, 1, false}).value() == -1.0);
  const AccurateSum c = frak_S({100, 7, 1, true});
  CHECK(c.value() == doctest::Approx(-186859.0 / 180180).epsilon(1e-15));
  CHECK(c.term_count() == 7);
}

TEST_CASE("frak_S at a highly divisible x") {
  // 2520 is divisible by 5..8, so every ψ is -1/2.
  const AccurateSum s = frak_S({2520, 4, 0, false});
  CHECK(s.value() == -0.5 * (4 + 2 + 6 + 4));
}

TEST_CASE("frak_S against exact rationals") {
  for (const auto& [x, n] : {std::pair<u64, u64>{1000, 1}, {1000, 37}, {99'991, 300}, {123'456, 1000}}) {
    for (const int delta : {0, 1}) {
      for (const bool weighted : {true, false}) {
        const AccurateSum s = frak_S({x, n, delta, weighted});
        const BigRational exact = exact_frak_S(x, n, delta, weighted);
        CAPTURE(x);
        CAPTURE(n);
        CHECK(s.term_count() == n);
        CHECK(std::fabs(s.value() - exact.get_d()) <= s.error_bound());
      }
    }
  }
}

TEST_CASE("aux sum parameter validation") {
  CHECK_THROWS_AS(frak_S({10, 11, 0, true}), DomainError);
  CHECK_THROWS_AS(frak_S({10, 0, 0, true}), DomainError);
  CHECK_THROWS_AS(frak_S({10, 2, 2, true}), DomainError);
  CHECK_THROWS_AS(frak_S_star_mobius({10, 2, -1, true}), DomainError);
}

TEST_CASE("Möbius form equals the direct weighted sum") {
  const AccurateSum m = frak_S_star_mobius({1000, 50, 1, true});
  const AccurateSum d = frak_S({1000, 50, 1, true});
  CHECK(std::fabs(m.value() - d.value()) <= m.error_bound() + d.error_bound());
  for (const u64 x : {u64{997}, u64{65'536}, u64{1'000'000}}) {
    for (const u64 n : {u64{2}, u64{17}, u64{256}, u64{x / 3}}) {
      for (const int delta : {0, 1}) {
        const AuxSumParams p{x, n, delta, true};
        const AccurateSum direct = frak_S(p);
        const AccurateSum mob = frak_S_star_mobius(p);
        CAPTURE(x);
        CAPTURE(n);
        CAPTURE(delta);
        CHECK(std::fabs(direct.value() - mob.value()) <= direct.error_bound() + mob.error_bound());
        CHECK(std::fabs(direct.value() - mob.value()) <= 1e-10 * std::max(1.0, std::fabs(direct.value())));
      }
    }
  }
}

TEST_CASE("parallel Möbius sum matches the serial reference") {
  for (const auto& p : {AuxSumParams{10'000, 3000, 0, true}, AuxSumParams{777'777, 20'000, 1, true}}) {
    const AccurateSum par = frak_S_star_mobius(p);
    const AccurateSum ser = serial::frak_S_star_mobius(p);
    CHECK(par.term_count() == ser.term_count());
    CHECK(std::fabs(par.value() - ser.value()) <= par.error_bound() + ser.error_bound());
  }
}

TEST_CASE("huxley_envelope values") {
  CHECK(huxley_envelope(2) == doctest::Approx(0.54756039161034934).epsilon(1e-14));
  CHECK(huxley_envelope(1'000'000) == doctest::Approx(27701.405191091171).epsilon(1e-14));
  CHECK_THROWS_AS(huxley_envelope(1), DomainError);
  double prev = huxley_envelope(3);
  for (u64 x = 4; x < 100'000; x = x * 3 / 2) {
    const double e = huxley_envelope(x);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("admissible_n boundary") {
  CHECK(admissible_n(972, 5));
  CHECK_FALSE(admissible_n(972, 6));
  CHECK(admissible_n(1943, 9));
  CHECK_FALSE(admissible_n(1943, 10));
}

TEST_CASE("derivative_check example") {
  const DerivativeCheckReport r = derivative_check(1'000'000, 1, 500, 0, 16);
  CHECK(r.m == 500);
  REQUIRE(r.records.size() == kMaxDerivativeOrder + 1);
  CHECK(r.records[1].min_abs == doctest::Approx(1.0));
  CHECK(r.records[1].max_abs == doctest::Approx(4.0));
  CHECK(r.lower_bounds_held());
  CHECK(r.signs_alternate());
  CHECK(r.records[1].fd_max_rel_error < 1e-6);
  CHECK(r.records[2].fd_max_rel_error < 1e-6);
  CHECK(r.records[3].fd_max_rel_error == -1);
}

TEST_CASE("derivative_check preconditions") {
  CHECK_THROWS_AS(derivative_check(1'000'000, 500, 500, 0, 4), DomainError);
  CHECK_THROWS_AS(derivative_check(1'000'000, 1, 5145, 0, 4), DomainError);
  CHECK_THROWS_AS(derivative_check(1'000'000, 1, 500, 2, 4), DomainError);
  CHECK_NOTHROW(derivative_check(1'000'000, 1, 5144, 1, 4));
}

TEST_CASE("derivative bounds hold on random admissible tuples") {
  const auto tuples = sample_admissible(20181, 100);
  REQUIRE(tuples.size() == 100);
  for (const auto& t : tuples) {
    CAPTURE(t.x);
    CAPTURE(t.k);
    CAPTURE(t.n);
    REQUIRE(admissible_n(t.x, t.n));
    REQUIRE(t.k < t.n);
    const DerivativeCheckReport r = derivative_check(t.x, t.k, t.n, t.delta, 16);
    CHECK(r.lower_bounds_held());
    CHECK(r.signs_alternate());
    CHECK(r.max_fd_error() < 1e-6);
    for (const auto& rec : r.records) {
      CHECK(rec.implied_c >= 1.0);
      CHECK(rec.min_abs <= rec.max_abs);
    }
  }
  const auto again = sample_admissible(20181, 100);
  CHECK(std::equal(tuples.begin(), tuples.end(), again.begin(), [](const auto& a, const auto& b) {
    return a.x == b.x && a.k == b.k && a.n == b.n && a.delta == b.delta;
  }));
}

TEST_CASE("derivative sign alternation and closed form") {
  for (int j = 0; j <= kMaxDerivativeOrder; ++j) {
    const double d = derivative(1000, 3, 1, j, 7.0);
    CHECK((d > 0) == (j % 2 == 0));
    double expected = 1000.0 / 22.0;
    for (int i = 1; i <= j; ++i) expected *= i * 3.0 / 22.0;
    CHECK(std::fabs(d) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("weighted auxiliary sums stay within twice the calibrated envelope constant") {
  auto worst_ratio = [](u64 x) {
    const u64 n_max = x * 5 / 972;
    double worst = 0;
    for (u64 n = 1; n <= n_max; n *= 2) {
      for (const int delta : {0, 1}) {
        worst = std::max(worst, std::fabs(frak_S({x, n, delta, true}).value()) / huxley_envelope(x));
      }
    }
    return worst;
  };
  const double c = std::max(worst_ratio(10'000), worst_ratio(100'000));
  REQUIRE(c > 0);
  for (const u64 x : {u64{1'000'000}, u64{10'000'000}}) {
    const double r = worst_ratio(x);
    CAPTURE(x);
    MESSAGE("x = " << x << ": max ratio " << r << ", calibrated c = " << c);
    CHECK(r <= 2 * c);
  }
}
