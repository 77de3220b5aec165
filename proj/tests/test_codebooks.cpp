#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mnac/codebooks.hpp"
#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

using namespace mnac;

namespace {
double energy(std::span<const double> x) {
  double e = 0;
  for (double v : x) e += v * v;
  return e;
}
}  // namespace

TEST_CASE("truncated Gaussian vectors respect the energy cap") {
  Rng rng(1);
  for (int len : {1, 2, 5, 64}) {
    for (const auto& v : gen_truncated_gaussian(200, len, 3.0, rng)) {
      CHECK(v.size() == static_cast<std::size_t>(len));
      CHECK(energy(v) <= 3.0);
    }
  }
  CHECK_THROWS_AS(gen_truncated_gaussian(0, 4, 1.0, rng), DomainError);
}

TEST_CASE("raw sampler acceptance rate matches the normalizer") {
  Rng rng(2);
  const auto mc = mu_monte_carlo(2, 1000000, rng);
  const double mu = 1.0 - std::exp(-2.0);
  CHECK(std::abs(mc.value - mu) < 3.0 * std::sqrt(mu * (1 - mu) / 1e6));
  for (int len : {2, 8, 32}) {
    Rng r(100 + len);
    const long trials = 200000;
    const auto est = mu_monte_carlo(len, trials, r);
    const double exact = mu_exact(len).value;
    CAPTURE(len);
    CHECK(std::abs(est.value - exact) < 3.0 * std::sqrt(exact * (1 - exact) / trials) + 1e-12);
  }
}

TEST_CASE("mean number of raw draws per accepted vector is 1/mu") {
  Rng rng(3);
  std::vector<double> x(2);
  long draws = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) draws += draw_truncated_gaussian(x, 2.0, rng);
  const double mu = mu_exact(2).value;
  const double mean = static_cast<double>(draws) / n;
  // geometric with success mu: sd of one count is sqrt(1 - mu) / mu
  CHECK(std::abs(mean - 1.0 / mu) < 3.0 * std::sqrt(1 - mu) / mu / std::sqrt(n));
}

TEST_CASE("codebook has a zero word 0, capped words, and is reproducible") {
  Rng a(7), b(7), c(8);
  const auto cb = gen_codebook(5, 16, 4.0, a);
  CHECK(cb.words.rows == 6);
  for (double x : cb.word(0)) CHECK(x == 0.0);
  for (int w = 0; w <= 5; ++w) CHECK(energy(cb.word(w)) <= 4.0);
  CHECK(gen_codebook(5, 16, 4.0, b).words.data == cb.words.data);
  CHECK(gen_codebook(5, 16, 4.0, c).words.data != cb.words.data);
  CHECK_THROWS_AS(gen_codebook(1, 16, 4.0, a), DomainError);
}

TEST_CASE("signature matrix shape, cap and near-orthogonality") {
  Rng one(1);
  CHECK(gen_signatures(1, 8, 1.0, one).ell == 1);
  double mean_abs = 0;
  int pairs = 0;
  const double E_sig = 10.0;
  const int n_sig = 64;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto S = gen_signatures(12, n_sig, E_sig, rng);
    for (int i = 0; i < 12; ++i) {
      CHECK(energy(S.signature(i)) <= E_sig);
      for (int j = i + 1; j < 12; ++j) {
        double ip = 0;
        for (int m = 0; m < n_sig; ++m) ip += S.signature(i)[m] * S.signature(j)[m];
        mean_abs += std::abs(ip);
        ++pairs;
      }
    }
  }
  mean_abs /= pairs;
  CHECK(mean_abs <= 3.0 * E_sig / std::sqrt(n_sig));
}

TEST_CASE("PPM codebook layout") {
  const auto cb = gen_ppm_codebook(2, 4, 4.0, 0.25);
  CHECK(cb.word(1)[0] == doctest::Approx(1.0));
  CHECK(cb.word(1)[1] == doctest::Approx(std::sqrt(3.0)));
  CHECK(cb.word(1)[2] == 0.0);
  CHECK(cb.word(1)[3] == 0.0);
  for (double x : cb.word(0)) CHECK(x == 0.0);

  // a slot of 4 holds the pilot plus 3 message positions
  CHECK_NOTHROW(gen_ppm_codebook(3, 4, 1.0, 0.5));
  CHECK_THROWS_AS(gen_ppm_codebook(4, 4, 1.0, 0.5), SizeError);

  const double E = 7.5, t = 0.3;
  const auto big = gen_ppm_codebook(9, 12, E, t);
  for (int w = 1; w <= 9; ++w) {
    CHECK(energy(big.word(w)) == doctest::Approx(E).epsilon(1e-14));
    for (int u = w + 1; u <= 9; ++u) {
      double ip = 0, ip_no_pilot = 0;
      for (int m = 0; m < 12; ++m) {
        ip += big.word(w)[m] * big.word(u)[m];
        if (m > 0) ip_no_pilot += big.word(w)[m] * big.word(u)[m];
      }
      CHECK(ip == doctest::Approx(t * E).epsilon(1e-14));
      CHECK(ip_no_pilot == 0.0);
    }
  }
}

TEST_CASE("exact normalizer") {
  CHECK(mu_exact(2).value == doctest::Approx(0.86466471676338731).epsilon(1e-14));
  CHECK(mu_exact(7).value == doctest::Approx(0.94881864658693455).epsilon(1e-13));
  CHECK(mu_exact(64).value == doctest::Approx(0.99999638297890483).epsilon(1e-13));
  CHECK(mu_exact(100).value > mu_exact(10).value);
  for (int len = 1; len <= 512; ++len) {
    const double mu = mu_exact(len).value;
    CHECK(mu == doctest::Approx(boost::math::gamma_p(0.5 * len, len)).epsilon(1e-12));
    CHECK(mu > 0.0);
    CHECK(mu <= 1.0);
  }
}

TEST_CASE("normalizer increases with length") {
  // the miss mass 1 - mu does not saturate in double precision, so strict
  // monotonicity is checked on it
  double prev_tail = 1.0, prev_mu = 0.0;
  for (int len = 1; len <= 512; ++len) {
    const double tail = gamma_q(0.5 * len, len);
    const double mu = mu_exact(len).value;
    CAPTURE(len);
    CHECK(tail < prev_tail);
    CHECK(mu >= prev_mu);
    prev_tail = tail;
    prev_mu = mu;
  }
}

TEST_CASE("Chernoff lower bound on the normalizer") {
  CHECK(mu_chernoff_lb(2).value == doctest::Approx(0.26424111765711536).epsilon(1e-14));
  for (int len = 1; len <= 512; ++len) CHECK(mu_chernoff_lb(len).value <= mu_exact(len).value);
  CHECK_THROWS(mu_chernoff_lb(0));
  CHECK_THROWS(mu_exact(0));
}

TEST_CASE("CSV snapshot round-trips bit-exactly") {
  Rng rng(17);
  const auto cb = gen_codebook(3, 5, 2.0, rng);
  std::stringstream ss;
  write_matrix_csv(ss, cb.words);
  const Matrix back = read_matrix_csv(ss);
  CHECK(back.rows == cb.words.rows);
  CHECK(back.cols == cb.words.cols);
  CHECK(back.data == cb.words.data);
  std::stringstream bad("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(bad), DimensionMismatch);
}
