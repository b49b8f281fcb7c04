#include <random>

#include "dirbound/kernels.hpp"
#include "doctest.h"

using namespace dirbound;

namespace {

SymbolSpec verified_poly(std::vector<Complex> c) {
  return verify_self_map(SymbolSpec::polynomial(std::move(c))).symbol;
}

Complex random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(std::sqrt(u(rng)), kTwoPi * u(rng));
}

}  // namespace

TEST_CASE("kernel values") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Complex z = random_point(rng);
    const Complex w = random_point(rng);
    CHECK(std::abs(eval_kernel(SymbolSpec::identity(), z, w) - 1.0) < 1e-14);
    CHECK(std::abs(eval_kernel(SymbolSpec::monomial(2), z, w) - (1.0 + z * std::conj(w))) < 1e-14);
    const Complex a(0.3, -0.4);
    const Complex expected = (1.0 - std::norm(a)) / ((1.0 - std::conj(a) * z) * (1.0 - a * std::conj(w)));
    CHECK(std::abs(eval_kernel(SymbolSpec::mobius(a), z, w) - expected) < 1e-13);
  }
  CHECK(std::abs(eval_kernel(SymbolSpec::monomial(2), 1.0, 1.0) - 2.0) < 1e-15);

  SUBCASE("blaschke kernel matches the quotient away from the diagonal") {
    const SymbolSpec b = SymbolSpec::blaschke({0.5, Complex(-0.2, 0.6)}, 0.4);
    const Complex z(0.2, 0.1);
    const Complex w(-0.5, 0.3);
    const Complex quotient = (1.0 - eval_symbol(b, z) * std::conj(eval_symbol(b, w))) /
                             (1.0 - z * std::conj(w));
    CHECK(std::abs(eval_kernel(b, z, w) - quotient) < 1e-14);
  }
  SUBCASE("polynomial kernel is singular on the boundary diagonal") {
    try {
      eval_kernel(verified_poly({0.5, 0.5}), 1.0, 1.0);
      FAIL("expected E_SINGULAR");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingular);
    }
  }
}

TEST_CASE("diagonal boundary value") {
  CHECK(diagonal_boundary_value(SymbolSpec::identity(), BoundaryPoint(1.1)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(diagonal_boundary_value(SymbolSpec::monomial(2), BoundaryPoint(0.0)) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(diagonal_boundary_value(verified_poly({0.5, 0.5}), BoundaryPoint(0.0)) ==
        doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(diagonal_boundary_value(verified_poly({0.5, 0.5}), BoundaryPoint(2.0)), Error);
}

TEST_CASE("estimate_sup") {
  const auto id = estimate_sup(SymbolSpec::identity());
  CHECK(id.verdict == SupVerdict::kBounded);
  CHECK(std::abs(id.value - 1.0) <= 1e-12);

  const auto mob = estimate_sup(SymbolSpec::mobius(0.5));
  CHECK(mob.verdict == SupVerdict::kBounded);
  CHECK(mob.value == doctest::Approx(3.0).epsilon(1e-3));

  const auto constant = estimate_sup(verified_poly({0.3}));
  CHECK(constant.verdict == SupVerdict::kUnbounded);
  CHECK(constant.infinite);
  CHECK(constant.value > 1e6);
  REQUIRE(constant.trace.size() >= 2);
  CHECK(constant.trace.size() - 1 <= 4);
  const auto& last = constant.trace.back();
  const auto& prev = constant.trace[constant.trace.size() - 2];
  CHECK(last.running_max >= 2.0 * prev.running_max);

  SUBCASE("running maxima never decrease") {
    for (const auto& est : {id, mob, constant, estimate_sup(SymbolSpec::blaschke({0.3, -0.6}))}) {
      for (std::size_t i = 1; i < est.trace.size(); ++i) {
        CHECK(est.trace[i].running_max >= est.trace[i - 1].running_max);
        CHECK(est.trace[i].resolution > est.trace[i - 1].resolution);
      }
    }
  }
  SUBCASE("blaschke supremum is the largest boundary derivative") {
    const SymbolSpec b = SymbolSpec::blaschke({0.5, Complex(0.0, 0.5)});
    double best = 0.0;
    for (int j = 0; j < 20000; ++j) {
      best = std::max(best, std::abs(eval_symbol_deriv(b, std::polar(1.0, kTwoPi * j / 20000.0))));
    }
    const auto est = estimate_sup(b);
    CHECK(est.verdict == SupVerdict::kBounded);
    CHECK(est.value == doctest::Approx(best).epsilon(1e-6));
    CHECK(est.interior_violations == 0);
  }
  SUBCASE("a polynomial inner map goes through the radial limit") {
    const auto est = estimate_sup(verified_poly({0.0, 0.0, 1.0}));
    CHECK(est.verdict == SupVerdict::kBounded);
    CHECK(est.value == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("a non-inner polynomial is unbounded") {
    CHECK(estimate_sup(verified_poly({0.5, 0.5})).verdict == SupVerdict::kUnbounded);
  }
  SUBCASE("seed changes interior samples only") {
    SupSettings s;
    s.seed = 99;
    const auto other = estimate_sup(SymbolSpec::mobius(0.5), s);
    CHECK(other.value == mob.value);
    CHECK(other.interior_max != mob.interior_max);
  }
}

TEST_CASE("closed_form_sup") {
  CHECK(closed_form_sup(SymbolSpec::rotation(0.4)) == 1.0);
  CHECK(closed_form_sup(SymbolSpec::mobius(0.5)) == doctest::Approx(3.0));
  CHECK(closed_form_sup(SymbolSpec::monomial(3)) == 3.0);
  CHECK_THROWS_AS(closed_form_sup(SymbolSpec::blaschke({0.1})), Error);
}

TEST_CASE("pointwise kernel identity") {
  CHECK(pointwise_kernel_identity_check(SymbolSpec::identity(), 10000) <= 1e-14);
  CHECK(pointwise_kernel_identity_check(SymbolSpec::monomial(2), 10000) <= 1e-13);
  CHECK(pointwise_kernel_identity_check(SymbolSpec::mobius(Complex(0.0, 0.7)), 10000) <= 1e-13);
}
