#include "ergolab/convexity.hpp"
#include "ergolab/errors.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace ergolab;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

double hanner_oracle(double p, double eps) {
  const Big half = Big(eps) / 2;
  return static_cast<double>(half - half * pow(1 - pow(half, Big(p)), 1 / Big(p)));
}

}  // namespace

TEST_CASE("u from delta") {
  CHECK(u_from_delta([](double) { return 0.0; }, 1.3) == 0.0);
  CHECK(u_from_delta([](double) { return 1.0; }, 2.0) == 1.0);
  CHECK(u_from_delta([](double e) { return e / 4; }, 1.0) == 0.125);
  CHECK_THROWS_AS(u_from_delta([](double) { return 0.0; }, 0.0), DomainError);
  CHECK_THROWS_AS(u_from_delta([](double) { return 0.0; }, 2.5), DomainError);
}

TEST_CASE("Hanner modulus") {
  CHECK(hanner_u(2, 2) == 1.0);
  CHECK(hanner_u(2, std::sqrt(2.0)) == doctest::Approx(0.20711).epsilon(1e-4));
  CHECK(hanner_u(2, std::sqrt(2.0)) == doctest::Approx(hanner_oracle(2, std::sqrt(2.0))).epsilon(1e-12));
  CHECK(hanner_u(4, 1) == doctest::Approx(0.0080).epsilon(0.01));
  CHECK(hanner_u(4, 1) == doctest::Approx(hanner_oracle(4, 1)).epsilon(1e-12));
  CHECK(hanner_u(2, 0.5) == doctest::Approx(0.25 * (1 - std::sqrt(15.0) / 4)).epsilon(1e-12));
  CHECK_THROWS_AS(hanner_u(1.5, 1), DomainError);
  try {
    hanner_u(1.5, 1);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("small") != std::string::npos);
  }
  for (double p : {2.0, 3.0, 4.5}) {
    for (int i = 1; i <= 2000; ++i) {
      const double eps = i * 1e-3;
      CHECK(hanner_u(p, eps) == u_from_delta([p](double e) { return hanner_delta(p, e); }, eps));
    }
  }
}

TEST_CASE("p-uniform and small-p moduli") {
  CHECK(p_uniform_u(1, 1, 1) == 1.0);
  CHECK(p_uniform_u(0.5, 2, 0.5) == 1.0 / 16);
  CHECK_THROWS_AS(p_uniform_u(0, 2, 1), DomainError);
  CHECK(lp_small_p_u(1.5, 1) == 1.0 / 32);
  CHECK(lp_small_p_u(1.0 + 1e-12, 1) < 1e-12);
  CHECK_THROWS_AS(lp_small_p_u(2, 1), DomainError);
  CHECK_THROWS_AS(lp_small_p_u(1, 1), DomainError);
}

TEST_CASE("grid positivity and monotonicity") {
  const ConvexityModulus moduli[] = {ConvexityModulus::hanner(2), ConvexityModulus::hanner(3),
                                     ConvexityModulus::p_uniform(0.3, 2), ConvexityModulus::small_p(1.25),
                                     ConvexityModulus::for_lp(1.5), ConvexityModulus::for_lp(4)};
  for (const auto& u : moduli) {
    double prev = 0;
    for (int i = 1; i <= 2000; ++i) {
      const double eps = i * 1e-3;
      const double v = u(eps);
      CHECK(v > 0);
      CHECK(v >= prev);
      prev = v;
    }
  }
  for (int i = 1; i <= 2000; ++i) CHECK(hanner_u(2, i * 1e-3) <= i * 1e-3 / 2);
}

TEST_CASE("modulus objects") {
  CHECK(ConvexityModulus::for_lp(1.5).type() == ModulusType::kSmallP);
  CHECK_FALSE(ConvexityModulus::for_lp(1.5).sharp());
  CHECK(ConvexityModulus::for_lp(2).type() == ModulusType::kHanner);
  CHECK(ConvexityModulus::hanner(2)(0.5) == hanner_u(2, 0.5));
  CHECK(ConvexityModulus::from_delta([](double e) { return e / 4; })(1.0) == 0.125);
  CHECK_THROWS_AS(ConvexityModulus::hanner(1.2), DomainError);
}
