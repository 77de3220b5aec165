#include "mnac/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mnac/activity_detection.hpp"
#include "mnac/codebooks.hpp"
#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

namespace mnac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

double BoundReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms) {
    if (k == key) return v;
  }
  throw std::out_of_range("bound report has no term " + key);
}

void TypeErrorQuery::validate() const {
  if (k_active < 1) throw DomainError("k_active must be >= 1");
  if (errors < 1 || errors > k_active) throw DomainError("error count must lie in 1..k_active");
}

double e0_msg(const TypeErrorQuery& q, double rho, double E_msg, int n_msg, double N0) {
  q.validate();
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(E_msg >= 0.0, "E_msg must be nonnegative");
  require(n_msg > 0, "n_msg must be positive");
  require(N0 > 0.0, "N0 must be positive");
  const double snr = 2.0 * q.a() * q.k_active * E_msg / (n_msg * (rho + 1.0) * N0);
  return 0.5 * rho * std::log1p(snr);
}

BoundReport pr_type_error_ub(const TypeErrorQuery& q, double rho, double M, double E_msg, int n_msg, double N0,
                             double mu) {
  require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
  require(M >= 1.0, "M must be >= 1");
  require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  const double e0 = e0_msg(q, rho, E_msg, n_msg, N0);
  BoundReport r{"pr_type_error_ub", 0, true, {}};
  const double log_mu = -2.0 * q.k_active * std::log(mu);
  const double log_choose = log_binomial(q.k_active, q.errors);
  const double log_messages = q.errors * rho * std::log(M);
  const double log_exponent = -n_msg * e0;
  const double log_value = log_mu + log_choose + log_messages + log_exponent;
  r.add("E0", e0)
      .add("log_mu_factor", log_mu)
      .add("log_binomial", log_choose)
      .add("log_message_factor", log_messages)
      .add("log_exponent", log_exponent)
      .add("log_value", log_value);
  r.value = std::exp(log_value);
  r.valid = r.value <= 1.0;
  return r;
}

BoundReport decode_error_budget(int k_active, double rho, double M, double E_msg, int n_msg, double N0, double mu) {
  BoundReport r{"decode_error_budget", 0, true, {}};
  double total = 0.0;
  for (int e = 1; e <= k_active; ++e) {
    const double v = pr_type_error_ub({e, k_active}, rho, M, E_msg, n_msg, N0, mu).value;
    r.add("errors_" + std::to_string(e), v);
    total += v;
  }
  r.value = total;
  r.valid = total <= 1.0;
  return r;
}

double f_msg(const TypeErrorQuery& q, double rho, double M, double E_msg, int n_msg, double N0) {
  require(E_msg > 0.0, "E_msg must be positive");
  require(M >= 1.0, "M must be >= 1");
  const double e0 = e0_msg(q, rho, E_msg, n_msg, N0);
  return n_msg * e0 / E_msg - q.a() * rho * q.k_active * std::log(M) / E_msg -
         q.k_active * binary_entropy(q.a()) / E_msg;
}

double detect_exponent_scaled(double lambda, double rho, int kappa1, int kappa2, int d_weight, int ell, int n_sig,
                              double E_sig) {
  require(lambda >= 0.0, "lambda must be nonnegative");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(kappa1 >= 0 && kappa1 <= d_weight, "misses must lie in 0..|d|");
  require(kappa2 >= 0 && kappa2 <= ell, "false alarms must lie in 0..ell");
  require(n_sig > 0, "n_sig must be positive");
  require(E_sig >= 0.0, "E_sig must be nonnegative");
  const double et = 0.5 * E_sig;
  const double lr = lambda * rho;
  const double fa = -0.5 * (1.0 - rho) * n_sig * std::log1p(lambda * kappa2 * et / n_sig);
  const double joint =
      0.5 * n_sig * std::log1p((lambda * (1.0 - lr) * kappa2 + lr * (1.0 - lr) * kappa1) * et / n_sig);
  const double miss_count = d_weight > 0 ? d_weight * binary_entropy(static_cast<double>(kappa1) / d_weight) : 0.0;
  const double fa_count = rho * ell * binary_entropy(static_cast<double>(kappa2) / ell);
  return fa + joint - miss_count - fa_count;
}

double detect_exponent_g(double lambda, double rho, int kappa1, int kappa2, int d_weight, int ell, int n_sig,
                         double E_sig) {
  require(E_sig > 0.0, "E_sig must be positive");
  return detect_exponent_scaled(lambda, rho, kappa1, kappa2, d_weight, ell, n_sig, E_sig) / (0.5 * E_sig);
}

double miss_exponent_lower(double lambda, double rho, int kappa1, int n_sig, double E_tilde) {
  require(E_tilde > 0.0 && n_sig > 0, "energy and length must be positive");
  const double lr = lambda * rho;
  return n_sig / (4.0 * E_tilde) * std::log1p(lr * (1.0 - lr) * kappa1 * E_tilde / n_sig);
}

double binomial_pmf(int ell, double alpha, int w) {
  if (w < 0 || w > ell) return 0.0;
  if (alpha >= 1.0) return w == ell ? 1.0 : 0.0;
  if (alpha <= 0.0) return w == 0 ? 1.0 : 0.0;
  return std::exp(log_binomial(ell, w) + w * std::log(alpha) + (ell - w) * std::log1p(-alpha));
}

BoundReport detection_budget(const SystemParams& params, const EnergySchedule& sched, const BoundParams& bp,
                             double mu) {
  params.validate();
  bp.validate();
  require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  require(sched.n_sig > 0, "signature length must be positive");
  const int ell = params.ell;
  const int v = v_cap(params, sched);
  const int v_eff = std::min(v, ell);
  if (static_cast<double>(v_eff) * v_eff * v_eff > 1e9) throw BudgetExceeded("detection budget enumeration too large");

  // exponent helpers take E_sig and halve it; feeding 2 E_sig / N0 gives a
  // working energy of E_sig / N0, i.e. unit-variance noise.
  const double e_norm = 2.0 * sched.E_sig / params.N0;
  const double et = sched.E_sig / params.N0;
  const double log_inv_mu = -std::log(mu);
  const double rho = bp.rho;

  const double overflow_term = std::exp(-params.k() * sched.c / 3.0);

  double detection_term = 0.0;
  for (int w = 1; w <= v_eff; ++w) {
    const double pw = binomial_pmf(ell, params.alpha, w);
    if (pw == 0.0) continue;
    double inner = 0.0;
    for (int k1 = 0; k1 <= w; ++k1) {
      const int k2_max = std::min(v, ell - w);
      for (int k2 = 0; k2 <= k2_max; ++k2) {
        if (k1 + k2 < 1 || w + k2 > v + k1) continue;
        const double scaled = detect_exponent_scaled(bp.lambda, rho, k1, k2, w, ell, sched.n_sig, e_norm);
        inner += std::exp((w + rho * k2) * log_inv_mu - scaled);
      }
    }
    detection_term += pw * inner;
  }

  double empty_inner = 0.0;
  for (int k2 = 1; k2 <= v_eff; ++k2) {
    const double q = 0.5 * sched.n_sig * std::log1p(k2 * et / (4.0 * sched.n_sig));
    const double u = ell * binary_entropy(static_cast<double>(k2) / ell);
    empty_inner += std::exp(k2 * log_inv_mu - (q - u));
  }
  const double p_empty = binomial_pmf(ell, params.alpha, 0);
  const double empty_term = p_empty * empty_inner;

  BoundReport r{"detection_budget", 0, true, {}};
  r.add("v", v)
      .add("mu", mu)
      .add("E_tilde", et)
      .add("overflow_term", overflow_term)
      .add("detection_term", detection_term)
      .add("empty_pattern_term", empty_term);
  r.value = overflow_term + detection_term + empty_term;
  r.valid = r.value <= 1.0;
  return r;
}

BoundReport gallager_awgn(double M, int n_code, double P, double N0, double rho) {
  require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
  require(M >= 1.0, "M must be >= 1");
  require(n_code > 0, "code length must be positive");
  require(P >= 0.0 && N0 > 0.0, "P must be nonnegative and N0 positive");
  const double e0 = 0.5 * rho * std::log1p(2.0 * P / ((1.0 + rho) * N0));
  BoundReport r{"gallager_awgn", 0, true, {}};
  const double log_messages = rho * std::log(M);
  const double log_exponent = -n_code * e0;
  r.add("E0", e0).add("log_message_factor", log_messages).add("log_exponent", log_exponent);
  r.value = std::exp(log_messages + log_exponent);
  r.valid = r.value <= 1.0;
  return r;
}

BoundReport ortho_code_bound(double M, double R_dot, double N0) {
  require(N0 > 0.0, "N0 must be positive");
  require(M >= 2.0, "M must be >= 2");
  if (!(R_dot > 0.0) || R_dot > 1.0 / N0) throw DomainError("rate must lie in (0, 1/N0]");
  const double length = std::log(M) / R_dot;  // = E
  double exponent;
  int branch;
  if (R_dot <= 0.25 / N0) {
    branch = 1;
    exponent = length * (0.5 / N0 - R_dot);
  } else {
    branch = 2;
    const double gap = std::sqrt(1.0 / N0) - std::sqrt(R_dot);
    exponent = length * gap * gap;
  }
  BoundReport r{"ortho_code_bound", 0, true, {}};
  r.add("branch", branch).add("energy", length).add("exponent", exponent);
  r.value = std::exp(-exponent);
  r.valid = r.value <= 1.0;
  return r;
}

BoundReport converse_joint(const SystemParams& params, double E, double Pe) {
  params.validate();
  require(E > 0.0, "E must be positive");
  require(Pe >= 0.0 && Pe < 1.0, "Pe must lie in [0, 1)");
  const double k = params.k();
  const double n = params.n;
  const double list = std::log(4.0) / (k * E);
  const double activity = binary_entropy(params.alpha) / (params.alpha * E) * (4.0 * Pe - 1.0);
  const double error = 4.0 * Pe * (1.0 / E + 1.0 / k);
  const double mutual = n / (2.0 * k * E) * std::log1p(2.0 * k * E / (n * params.N0));
  const double rhs = list + activity + error + mutual;
  const double prefactor = 1.0 - 4.0 * Pe * (1.0 + 1.0 / k);
  BoundReport r{"converse_joint", 0, true, {}};
  r.add("list_term", list)
      .add("activity_term", activity)
      .add("error_term", error)
      .add("mutual_information_term", mutual)
      .add("rhs", rhs)
      .add("prefactor", prefactor);
  r.valid = prefactor > 0.0;
  r.value = r.valid ? rhs / prefactor : kInf;
  return r;
}

BoundReport converse_ape(const SystemParams& params, double E, double Pe_A) {
  params.validate();
  require(E > 0.0, "E must be positive");
  require(Pe_A >= 0.0, "Pe_A must be nonnegative");
  const double ell = params.ell;
  const double n = params.n;
  // The additive one bit of the Fano step, in nats.
  const double fano = (kLn2 - binary_entropy(params.alpha)) / E;
  const double mutual = n / (2.0 * ell * E) * std::log1p(2.0 * params.k() * E / (n * params.N0));
  const double denominator = params.alpha - Pe_A;
  BoundReport r{"converse_ape", 0, true, {}};
  r.add("fano_term", fano).add("mutual_information_term", mutual).add("denominator", denominator);
  r.valid = denominator > 0.0;
  r.value = r.valid ? (fano + mutual) / denominator : kInf;
  return r;
}

BoundReport converse_ortho_user(double E, double n1, double N0, double P1) {
  require(E > 0.0 && n1 > 0.0 && N0 > 0.0, "E, n1 and N0 must be positive");
  require(P1 >= 0.0, "P1 must be nonnegative");
  const double fano = 1.0 / E;
  const double mutual = n1 / (2.0 * E) * std::log1p(2.0 * E / (n1 * N0));
  const double denominator = 1.0 - P1;
  BoundReport r{"converse_ortho_user", 0, true, {}};
  r.add("fano_term", fano).add("mutual_information_term", mutual).add("denominator", denominator);
  r.valid = denominator > 0.0;
  r.value = r.valid ? (fano + mutual) / denominator : kInf;
  return r;
}

BoundReport joint_error_lb(double E, double ell, double N0, double alpha) {
  require(ell >= 5.0, "ell must be >= 5");
  require(E >= 0.0 && N0 > 0.0, "E must be nonnegative and N0 positive");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  const double per_type = std::max(0.0, 1.0 - (256.0 * E / N0 + kLn2) / std::log(ell));
  const double some_active = -std::expm1(ell * std::log1p(-alpha));
  BoundReport r{"joint_error_lb", 0, true, {}};
  r.add("per_type_term", per_type).add("some_active_probability", some_active);
  r.value = per_type * some_active;
  return r;
}

double birge_bound(const std::vector<std::vector<double>>& kl) {
  const std::size_t N = kl.size();
  if (N < 3) throw DomainError("birge bound needs at least 3 hypotheses");
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (kl[i].size() != N) throw DimensionMismatch("KL matrix must be square");
    for (std::size_t j = 0; j < N; ++j) {
      if (kl[i][j] < 0.0) throw DomainError("KL entries must be nonnegative");
      sum += kl[i][j];
    }
  }
  const double n = static_cast<double>(N);
  return (sum / (n * n) + kLn2) / std::log(n - 1.0);
}

double gaussian_kl(double delta_sq_norm, double N0) {
  require(delta_sq_norm >= 0.0, "squared distance must be nonnegative");
  require(N0 > 0.0, "N0 must be positive");
  return delta_sq_norm / N0;
}

BoundReport normal_tail_report(double x) {
  BoundReport r{"normal_tail", normal_tail(x), true, {}};
  r.add("Q", r.value);
  if (x > 0.0) r.add("upper", normal_tail_upper(x));
  return r;
}

BoundReport ortho_user_error(double M, double t, double E, double N0) {
  require(t > 0.0 && t < 1.0, "t must lie in (0, 1)");
  require(E > 0.0 && N0 > 0.0, "E and N0 must be positive");
  const double pilot = 2.0 * normal_tail(std::sqrt(t * E / (2.0 * N0)));
  const double rate = std::log(M) / ((1.0 - t) * E);
  double code = 1.0;
  bool in_range = rate <= 1.0 / N0;
  if (in_range) code = ortho_code_bound(M, rate, N0).value;
  BoundReport r{"ortho_user_error", 0, true, {}};
  r.add("pilot_term", pilot).add("code_rate", rate).add("code_term", code);
  r.value = pilot + code;
  r.valid = in_range && r.value <= 1.0;
  return r;
}

BoundReport total_error_budget(const SystemParams& params, const EnergySchedule& sched, const BoundParams& bp,
                               double M) {
  BoundReport r{"total_error_budget", 0, true, {}};
  if (sched.scheme == Scheme::ortho) {
    const BoundReport user = ortho_user_error(M, sched.split, sched.E, params.N0);
    r.add("per_user", user.value);
    r.value = user.value >= 1.0 ? 1.0 : -std::expm1(params.ell * std::log1p(-user.value));
    r.valid = user.valid;
    return r;
  }
  const double mu_sig = mu_exact(sched.n_sig).value;
  const double mu_msg = mu_exact(sched.n_msg).value;
  const BoundReport det = detection_budget(params, sched, bp, mu_sig);
  const int cap = std::min(params.ell, static_cast<int>(std::floor(bp.xi * params.k())));
  double decode = 0.0;
  for (int kp = 1; kp <= cap; ++kp) {
    const double pk = binomial_pmf(params.ell, params.alpha, kp);
    if (pk == 0.0) continue;
    double best = kInf;
    for (double rho : {0.25, 0.5, 0.75, 1.0}) {
      best = std::min(best, decode_error_budget(kp, rho, M, sched.E_msg, sched.n_msg, params.N0, mu_msg).value);
    }
    decode += pk * best;
  }
  const double markov = 1.0 / bp.xi;
  r.add("detection_term", det.value).add("decode_term", decode).add("markov_term", markov);
  r.value = det.value + decode + markov;
  r.valid = r.value < 1.0;
  return r;
}

}  // namespace mnac
