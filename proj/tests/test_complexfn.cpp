#include <random>

#include "dirbound/complexfn.hpp"
#include "doctest.h"

using namespace dirbound;

namespace {

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("series evaluation") {
  const TruncatedPowerSeries z({0.0, 1.0});
  CHECK(eval_series(z, {0.3, 0.4}) == Complex(0.3, 0.4));
  CHECK(eval_series(TruncatedPowerSeries({1.0}), {0.7, -0.2}) == Complex(1.0));
  CHECK(close(eval_series(TruncatedPowerSeries({0.0, 0.0, 1.0}), {0.0, 1.0}), -1.0, 1e-15));

  SUBCASE("value at the origin is a_0 exactly") {
    const TruncatedPowerSeries s({Complex(0.1234567890123, -9.87), 3.0, -2.0});
    CHECK(eval_series(s, 0.0) == s[0]);
  }
  SUBCASE("length is authoritative") {
    const TruncatedPowerSeries s({1.0, 0.0, 0.0});
    CHECK(s.order() == 2);
    CHECK(TruncatedPowerSeries(std::vector<Complex>{}).order() == 0);
  }
}

TEST_CASE("differentiate") {
  auto d = differentiate(TruncatedPowerSeries({0.0, 1.0}));
  REQUIRE(d.order() == 0);
  CHECK(d[0] == Complex(1.0));
  d = differentiate(TruncatedPowerSeries({5.0}));
  REQUIRE(d.order() == 0);
  CHECK(d[0] == Complex(0.0));
  d = differentiate(TruncatedPowerSeries({0.0, 0.0, 1.0}));
  REQUIRE(d.order() == 1);
  CHECK(d[0] == Complex(0.0));
  CHECK(d[1] == Complex(2.0));
}

TEST_CASE("catalog symbols") {
  CHECK(close(eval_symbol(SymbolSpec::mobius(0.5), 0.0), 0.5, 1e-15));
  CHECK(close(eval_symbol(SymbolSpec::monomial(2), {0.0, 1.0}), -1.0, 1e-15));
  CHECK(close(eval_symbol(SymbolSpec::blaschke({0.5, -0.5}), 0.0), -0.25, 1e-15));

  CHECK(close(eval_symbol_deriv(SymbolSpec::monomial(2), 1.0), 2.0, 1e-15));
  CHECK(close(eval_symbol_deriv(SymbolSpec::mobius(0.5), 0.0), -0.75, 1e-15));
  const double theta = 0.83;
  CHECK(close(eval_symbol_deriv(SymbolSpec::rotation(theta), {0.1, 0.2}),
              std::polar(1.0, theta), 1e-15));

  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(SymbolSpec::mobius(1.0), Error);
    CHECK_THROWS_AS(SymbolSpec::monomial(0), Error);
    CHECK_THROWS_AS(SymbolSpec::blaschke({Complex(0.0, 1.0)}), Error);
  }
  SUBCASE("catalog maps stay inside the disc") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const SymbolSpec maps[] = {SymbolSpec::mobius({0.3, -0.6}, 1.0), SymbolSpec::monomial(3),
                               SymbolSpec::blaschke({0.2, Complex(0.1, 0.7)}, 2.0)};
    for (const auto& phi : maps) {
      for (int k = 0; k < 500; ++k) {
        const Complex z = std::polar(std::sqrt(u(rng)) * 0.999, kTwoPi * u(rng));
        CHECK(std::abs(eval_symbol(phi, z)) < 1.0);
      }
    }
  }
  SUBCASE("closed-form derivatives match central differences") {
    const SymbolSpec maps[] = {SymbolSpec::mobius({0.3, -0.6}, 1.0), SymbolSpec::monomial(4),
                               SymbolSpec::blaschke({0.2, Complex(0.1, 0.7), -0.4}, 0.5)};
    const Complex z(0.21, -0.33);
    const double h = 1e-6;
    for (const auto& phi : maps) {
      const Complex fd = (eval_symbol(phi, z + h) - eval_symbol(phi, z - h)) / (2.0 * h);
      CHECK(close(eval_symbol_deriv(phi, z), fd, 1e-8));
    }
  }
  SUBCASE("post rotation") {
    const Complex z(0.3, 0.1);
    const SymbolSpec m = post_rotated(SymbolSpec::monomial(3), 0.7);
    CHECK(close(eval_symbol(m, z), std::polar(1.0, 0.7) * std::pow(z, 3), 1e-14));
    const SymbolSpec b = post_rotated(SymbolSpec::mobius(0.4), -1.1);
    CHECK(close(eval_symbol(b, z), std::polar(1.0, -1.1) * eval_symbol(SymbolSpec::mobius(0.4), z),
                1e-14));
  }
}

TEST_CASE("unverified polynomial is rejected") {
  const SymbolSpec p = SymbolSpec::polynomial({0.5, 0.5});
  CHECK_FALSE(p.verified());
  try {
    eval_symbol(p, 0.0);
    FAIL("expected E_SYMBOL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSymbol);
  }
}

TEST_CASE("coefficients_of") {
  auto ident = [](Complex z) { return z; };
  auto s = coefficients_of(ident, 4, {.radius = 0.9});
  REQUIRE(s.series.order() == 4);
  for (std::size_t n = 0; n <= 4; ++n) CHECK(close(s.series[n], n == 1 ? 1.0 : 0.0, 1e-10));

  auto sq = [](Complex z) { return (0.3 + 0.2 * z) * (0.3 + 0.2 * z); };
  s = coefficients_of(sq, 4);
  const double expected[] = {0.09, 0.12, 0.04, 0.0, 0.0};
  for (std::size_t n = 0; n <= 4; ++n) CHECK(close(s.series[n], expected[n], 1e-10));

  s = coefficients_of([](Complex) { return Complex(1.0); }, 3);
  CHECK(close(s.series[0], 1.0, 1e-12));
  CHECK(close(s.series[3], 0.0, 1e-12));

  SUBCASE("truncation error is reported") {
    auto far = [](Complex z) { return 1.0 / (1.0 - 0.95 * z); };
    CHECK_THROWS_AS(coefficients_of(far, 4), Error);
  }
}

TEST_CASE("verify_self_map") {
  const auto half = verify_self_map(SymbolSpec::polynomial({0.5, 0.5}));
  CHECK(half.symbol.verified());
  CHECK(half.contact);
  CHECK(std::abs(std::remainder(half.argmax.angle(), kTwoPi)) < 1e-6);

  try {
    verify_self_map(SymbolSpec::polynomial({0.0, 2.0}));
    FAIL("expected E_SYMBOL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSymbol);
  }

  const auto constant = verify_self_map(SymbolSpec::polynomial({0.2}));
  CHECK_FALSE(constant.contact);
  CHECK(constant.max_modulus == doctest::Approx(0.2).epsilon(1e-14));

  CHECK_THROWS_AS(verify_self_map(SymbolSpec::polynomial({0.2}), 100), Error);
}
