#pragma once

namespace mnac {

// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
// Series for x < a + 1, Lentz continued fraction for the upper tail otherwise;
// relative error below 1e-12 over the ranges used here.
double gamma_p(double a, double x);

// Upper complement Q(a, x) = 1 - P(a, x), computed without cancellation.
double gamma_q(double a, double x);

// ln C(n, k) for real n >= k >= 0 via lgamma.
double log_binomial(double n, double k);

// Binary entropy in nats with 0 ln 0 = 0. Throws DomainError outside [0, 1].
double binary_entropy(double p);

// Standard normal upper tail Q(x) = P(Z > x).
double normal_tail(double x);

// e^{-x^2/2} / (sqrt(2 pi) x), an upper bound on Q(x) for x > 0.
double normal_tail_upper(double x);

// ln(exp(a) + exp(b)) without overflow; handles -inf operands.
double log_add(double a, double b);

}  // namespace mnac
