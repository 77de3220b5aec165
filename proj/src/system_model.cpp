#include "mnac/system_model.hpp"

#include <cmath>
#include <string>

#include "mnac/errors.hpp"

namespace mnac {

void SystemParams::validate() const {
  if (n < 1) throw DomainError("blocklength n must be >= 1");
  if (ell < 1) throw DomainError("user count ell must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(N0 > 0.0)) throw DomainError("N0 must be positive");
}

EnergySchedule make_joint_schedule(const SystemParams& params, double b) {
  params.validate();
  if (!(b > 0.0 && b < 1.0)) throw DomainError("signature fraction b must lie in (0, 1)");
  if (params.ell < 2) throw InvalidRegime("joint schedule needs ell >= 2");
  const double load = params.k() * std::log(static_cast<double>(params.ell));
  if (load >= params.n) throw InvalidRegime("k ln(ell) >= n: schedule constant would be <= 0");

  EnergySchedule s;
  s.scheme = Scheme::joint;
  s.split = b;
  s.c = std::log(params.n / load);
  s.E = s.c * std::log(static_cast<double>(params.ell));
  s.n_sig = static_cast<int>(std::floor(b * params.n));
  s.n_msg = params.n - s.n_sig;
  s.E_sig = b * s.E;
  s.E_msg = s.E - s.E_sig;
  return s;
}

EnergySchedule make_ortho_schedule(const SystemParams& params, double t) {
  params.validate();
  if (!(t > 0.0 && t < 1.0)) throw DomainError("pilot fraction t must lie in (0, 1)");
  const double log_n = std::log(static_cast<double>(params.n));
  const int slot = params.n / params.ell;
  if (slot < 2) throw InvalidRegime("slot length n/ell must be >= 2");
  if (params.ell * log_n >= params.n) throw InvalidRegime("ell ln(n) >= n: schedule constant would be <= 0");

  EnergySchedule s;
  s.scheme = Scheme::ortho;
  s.split = t;
  s.c = std::log(params.n / (params.ell * log_n));
  s.E = s.c * log_n;
  s.slot_len = slot;
  s.n_sig = 1;
  s.n_msg = slot - 1;
  s.E_sig = t * s.E;
  s.E_msg = s.E - s.E_sig;
  return s;
}

double single_user_capacity_pue(double N0) {
  if (!(N0 > 0.0)) throw DomainError("N0 must be positive");
  return 1.0 / N0;
}

RateSpec rate_from_target(double R_dot, double E) {
  if (!(R_dot > 0.0) || !(E > 0.0)) throw DomainError("rate and energy must be positive");
  const double target = std::round(std::exp(R_dot * E));
  if (!(target < 9.0e18)) throw DomainError("message count overflows 64 bits");
  return rate_from_messages(target < 2.0 ? 2 : static_cast<std::uint64_t>(target), E);
}

RateSpec rate_from_messages(std::uint64_t M, double E) {
  if (M < 2) throw DomainError("M must be >= 2");
  if (!(E > 0.0)) throw DomainError("energy must be positive");
  return {M, std::log(static_cast<double>(M)) / E};
}

MessageVector sample_messages(const SystemParams& params, int M, Rng& rng) {
  if (M < 2) throw DomainError("M must be >= 2");
  MessageVector w(params.ell, 0);
  for (int i = 0; i < params.ell; ++i) {
    if (rng.bernoulli(params.alpha)) w[i] = 1 + static_cast<int>(rng.uniform_below(M));
  }
  return w;
}

}  // namespace mnac
