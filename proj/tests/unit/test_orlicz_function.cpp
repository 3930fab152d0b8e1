#include <cmath>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "orlicz_lab/error.hpp"
#include "orlicz_lab/orlicz_function.hpp"

using namespace orlicz;

TEST_SUITE("orlicz_function") {

TEST_CASE("power family from spec") {
  const auto f = parse_orlicz_spec("power:p=2");
  CHECK(f(3.0) == doctest::Approx(9.0));
  CHECK(f(-1.5) == doctest::Approx(2.25));
  CHECK(f.growth_class() == GrowthClass::power(2.0));
  REQUIRE(f.power_exponent().has_value());
  CHECK(*f.power_exponent() == 2.0);
}

TEST_CASE("mix family from spec") {
  const auto f = parse_orlicz_spec("mix:p=1,q=2,w=0.5");
  CHECK(f(2.0) == doctest::Approx(0.5 * 2.0 + 0.5 * 4.0));
  CHECK(f.growth_class() == GrowthClass::power(2.0));
  CHECK_FALSE(f.power_exponent().has_value());
}

TEST_CASE("mix with zero weight on the steeper term grows like the other term") {
  const auto f = parse_orlicz_spec("mix:p=1,q=3,w=1");
  CHECK(f.growth_class() == GrowthClass::power(1.0));
}

TEST_CASE("non-convex power is a domain error") {
  CHECK_THROWS_AS(parse_orlicz_spec("power:p=0.5"), DomainError);
  CHECK_THROWS_AS(parse_orlicz_spec("mix:p=1,q=0.9,w=0.5"), DomainError);
  CHECK_THROWS_AS(parse_orlicz_spec("mix:p=1,q=2,w=1.5"), DomainError);
}

TEST_CASE("malformed specs are parse errors") {
  for (const char* bad : {"", "gauss", "power:", "power:p", "power:p=", "power:p=abc",
                          "power:q=2", "power:p=2,p=3", "power:p=2,", "coshm1:p=2",
                          "power:p=nan", "power:p=inf", "mix:p=1,q=2", "power:p=2x",
                          "power:p=1e", " power:p=2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_orlicz_spec(bad), ParseError);
  }
}

TEST_CASE("parse error names the offending token") {
  try {
    parse_orlicz_spec("power:z=2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("superpolynomial families") {
  const auto c = parse_orlicz_spec("coshm1");
  CHECK(c(1.0) == doctest::Approx(std::cosh(1.0) - 1.0));
  CHECK(c(1e-9) > 0.0);
  CHECK(c.growth_class().is_superpolynomial());
  const auto e = parse_orlicz_spec("expsq");
  CHECK(e(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(e(1e-9) > 0.0);
  CHECK(e.growth_class().at_least(4.0));
}

TEST_CASE("subgradient is odd and zero at the kink") {
  const auto f = OrliczFunction::power(1.0);
  CHECK(f.subgradient(0.0) == 0.0);
  CHECK(f.subgradient(2.0) == 1.0);
  CHECK(f.subgradient(-2.0) == -1.0);
  const auto g = OrliczFunction::mix(1.0, 2.0, 0.3);
  CHECK(g.subgradient(0.0) == 0.0);
}

TEST_CASE("axioms hold for power:p=3 on a small grid") {
  const std::vector<double> grid = {-2, -1, 0, 1, 2};
  const auto report = verify_orlicz_axioms(OrliczFunction::power(3.0), grid);
  CHECK(report.all_passed());
  CHECK(report.checks.size() == 6);
}

TEST_CASE("broken potential fails zero-at-origin") {
  const auto broken = OrliczFunction::custom(
      "shifted", [](double x) { return 1.0 + x * x; }, [](double x) { return 2.0 * x; },
      GrowthClass::power(2.0));
  const std::vector<double> grid = {-2, -1, 0, 1, 2};
  const auto report = verify_orlicz_axioms(broken, grid);
  CHECK_FALSE(report.all_passed());
  CHECK_FALSE(report.check("zero-at-origin").passed);
  CHECK(report.check("zero-at-origin").worst_violation == doctest::Approx(1.0));
  CHECK(report.check("midpoint-convexity").passed);
}

TEST_CASE("concave potential fails convexity and misdeclared growth is caught") {
  const auto sqrt_abs = OrliczFunction::custom(
      "sqrt", [](double x) { return std::sqrt(std::fabs(x)); },
      [](double x) { return x == 0.0 ? 0.0 : std::copysign(0.5 / std::sqrt(std::fabs(x)), x); },
      GrowthClass::power(2.0));
  const std::vector<double> grid = {-4, -1, 0, 1, 4};
  const auto report = verify_orlicz_axioms(sqrt_abs, grid);
  CHECK_FALSE(report.check("midpoint-convexity").passed);
  CHECK_FALSE(report.check("subgradient-inequality").passed);
  CHECK_FALSE(report.check("growth-class").passed);
}

TEST_CASE("asymmetric potential fails evenness") {
  const auto skew = OrliczFunction::custom(
      "skew", [](double x) { return x > 0 ? x * x : 2 * x * x; },
      [](double x) { return x > 0 ? 2 * x : 4 * x; }, GrowthClass::power(2.0));
  const std::vector<double> grid = {-1, 0, 1};
  CHECK_FALSE(verify_orlicz_axioms(skew, grid).check("evenness").passed);
}

TEST_CASE("empty grid is rejected") {
  CHECK_THROWS_AS(verify_orlicz_axioms(OrliczFunction::power(2.0), std::vector<double>{}),
                  DomainError);
}

TEST_CASE("property: every built-in family satisfies the axioms on random grids") {
  gen::Source src(0x0c1a55);
  for (int k = 0; k < 200; ++k) {
    CAPTURE(k);
    const double p = src.uniform(1.0, 6.0);
    const double q = src.uniform(1.0, 6.0);
    // The leading term keeps weight >= 0.15 so that the growth spot-check at
    // x in {10, 100, 1000} already sees the asymptotic regime.
    const double w = src.uniform(0.15, 0.85);
    const std::vector<OrliczFunction> fams = {OrliczFunction::power(p),
                                              OrliczFunction::mix(p, q, w),
                                              OrliczFunction::coshm1(), OrliczFunction::expsq()};
    const auto grid = src.symmetric_grid(src.integer(1, 12), src.uniform(0.1, 5.0));
    for (const auto& f : fams) {
      CAPTURE(f.spec());
      const auto report = verify_orlicz_axioms(f, grid);
      for (const auto& c : report.checks) {
        CAPTURE(c.axiom);
        CAPTURE(c.worst_violation);
        CHECK(c.passed);
      }
    }
  }
}

TEST_CASE("property: spec printer round-trips through the parser") {
  gen::Source src(0x5bec);
  for (int k = 0; k < 500; ++k) {
    CAPTURE(k);
    const double p = src.uniform(1.0, 10.0);
    const double q = src.log_uniform(1.0, 100.0);
    const double w = src.uniform(0.0, 1.0);
    for (const auto& f : {OrliczFunction::power(p), OrliczFunction::mix(p, q, w),
                          OrliczFunction::coshm1(), OrliczFunction::expsq()}) {
      const auto g = parse_orlicz_spec(f.spec());
      CHECK(g.spec() == f.spec());
      CHECK(g.params() == f.params());
      CHECK(g.growth_class() == f.growth_class());
      for (double x : {-3.0, -0.25, 0.0, 0.7, 2.0}) CHECK(g(x) == f(x));
    }
  }
}

}  // TEST_SUITE
