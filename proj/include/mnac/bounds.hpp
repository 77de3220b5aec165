#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mnac/message_decoding.hpp"
#include "mnac/system_model.hpp"

namespace mnac {

// A bound value with the named pieces it was assembled from. `valid` is false
// when the value falls outside the meaningful range (a probability above 1, a
// negative prefactor); values are never clipped.
struct BoundReport {
  std::string name;
  double value = 0;
  bool valid = true;
  std::vector<std::pair<std::string, double>> terms;

  double term(const std::string& key) const;
  BoundReport& add(std::string key, double v) {
    terms.emplace_back(std::move(key), v);
    return *this;
  }
};

// Fraction a = errors / k_active of decoded users in error.
struct TypeErrorQuery {
  int errors = 1;
  int k_active = 1;
  double a() const { return static_cast<double>(errors) / k_active; }
  void validate() const;
};

// Random-coding exponent (rho/2) ln(1 + 2 a k' E_msg / (n_msg (1 + rho) N0)).
double e0_msg(const TypeErrorQuery& q, double rho, double E_msg, int n_msg, double N0);

// Probability that exactly a k' of k' correctly detected users decode wrongly,
// for the truncated-Gaussian ensemble with normalizer mu.
BoundReport pr_type_error_ub(const TypeErrorQuery& q, double rho, double M, double E_msg, int n_msg, double N0,
                             double mu);

// Sum of pr_type_error_ub over a in {1/k', ..., 1}.
BoundReport decode_error_budget(int k_active, double rho, double M, double E_msg, int n_msg, double N0, double mu);

// Normalized exponent n' E0 / E' - a rho k' ln M / E' - k' H(a) / E'.
double f_msg(const TypeErrorQuery& q, double rho, double M, double E_msg, int n_msg, double N0);

// Detection exponent g for kappa1 misses and kappa2 false alarms out of a true
// pattern of weight d_weight. The working energy is E_sig / 2.
double detect_exponent_g(double lambda, double rho, int kappa1, int kappa2, int d_weight, int ell, int n_sig,
                         double E_sig);
// The same quantity multiplied by the working energy; finite at E_sig = 0.
double detect_exponent_scaled(double lambda, double rho, int kappa1, int kappa2, int d_weight, int ell, int n_sig,
                              double E_sig);
// Miss-only lower estimate (n'/(4 Et)) ln(1 + lambda rho (1 - lambda rho) kappa1 Et / n'),
// with Et the working energy. Used to study the small-load limit.
double miss_exponent_lower(double lambda, double rho, int kappa1, int n_sig, double E_tilde);

// Bound on the probability that the signature detector errs or that more than
// v users are active. Energies are normalized by N0 / 2 so the working energy
// is E_sig / N0.
BoundReport detection_budget(const SystemParams& params, const EnergySchedule& sched, const BoundParams& bp,
                             double mu);

BoundReport gallager_awgn(double M, int n_code, double P, double N0, double rho);

// Error probability of an M-ary orthogonal code at rate R nats per unit energy.
BoundReport ortho_code_bound(double M, double R_dot, double N0);

// Upper bound on the rate per unit energy for joint error Pe.
BoundReport converse_joint(const SystemParams& params, double E, double Pe);
// Upper bound on the rate per unit energy for per-user error Pe_A.
BoundReport converse_ape(const SystemParams& params, double E, double Pe_A);
// Single-user rate bound given n1 channel uses and error P1.
BoundReport converse_ortho_user(double E, double n1, double N0, double P1);

// Lower bound on the joint error probability.
BoundReport joint_error_lb(double E, double ell, double N0, double alpha);

// Upper bound on the mean success probability of N hypotheses with pairwise
// KL divergences kl[i][j] (nats).
double birge_bound(const std::vector<std::vector<double>>& kl);

// KL divergence between two Gaussians with per-coordinate variance N0/2 whose
// means differ by a vector of squared norm delta_sq.
double gaussian_kl(double delta_sq_norm, double N0);

// Q(x) with, for x > 0, the tail upper bound as term "upper".
BoundReport normal_tail_report(double x);

// Per-user error bound for pilot detection plus PPM decoding.
BoundReport ortho_user_error(double M, double t, double E, double N0);

// P(Binomial(ell, alpha) = w).
double binomial_pmf(int ell, double alpha, int w);

// Analytic budget for one operating point, as reported next to simulations.
// Joint: detection budget + sum over k' <= floor(xi k) of P(K = k') times the
// smallest decode budget over rho in {0.25, 0.5, 0.75, 1}, + 1/xi.
// Orthogonal: 1 - (1 - P1)^ell with P1 from ortho_user_error.
BoundReport total_error_budget(const SystemParams& params, const EnergySchedule& sched, const BoundParams& bp,
                               double M);

}  // namespace mnac
