#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "doctest.h"
#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

using namespace mnac;

TEST_CASE("regularized incomplete gamma matches Boost to 1e-12 relative") {
  for (double a : {0.5, 1.0, 1.5, 3.0, 16.0, 64.5, 256.0}) {
    for (double x : {0.01, 0.5, 1.0, 2.0, 5.0, 20.0, 63.0, 128.0, 512.0}) {
      const double ref = boost::math::gamma_p(a, x);
      const double ref_q = boost::math::gamma_q(a, x);
      CAPTURE(a);
      CAPTURE(x);
      CHECK(gamma_p(a, x) == doctest::Approx(ref).epsilon(1e-12));
      if (ref_q > 1e-280) CHECK(gamma_q(a, x) == doctest::Approx(ref_q).epsilon(1e-11));
    }
  }
  CHECK(gamma_p(2.0, 0.0) == 0.0);
  CHECK_THROWS_AS(gamma_p(0.0, 1.0), DomainError);
}

TEST_CASE("log binomial") {
  CHECK(std::exp(log_binomial(16, 2)) == doctest::Approx(120.0).epsilon(1e-13));
  CHECK(log_binomial(10, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(log_binomial(3, 4), DomainError);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(binary_entropy(0.25) == doctest::Approx(0.56233514461880835).epsilon(1e-14));
  for (double p = 0.01; p < 1.0; p += 0.01) CHECK(binary_entropy(p) == doctest::Approx(binary_entropy(1.0 - p)));
  CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
  CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
}

TEST_CASE("normal tail and its upper bound") {
  CHECK(normal_tail(0.0) == 0.5);
  CHECK(normal_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  for (double x : {0.5, 1.0, 2.0, 4.0}) CHECK(normal_tail(x) <= normal_tail_upper(x));
  CHECK_THROWS(normal_tail_upper(0.0));
}

TEST_CASE("log_add") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add(-INFINITY, 1.0) == 1.0);
  CHECK(log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}
