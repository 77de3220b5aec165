#pragma once

#include <cstdint>
#include <vector>

#include "mnac/rng.hpp"

namespace mnac {

// One (n, ell, alpha) operating point. Logs are natural throughout.
struct SystemParams {
  int n = 0;          // blocklength in channel uses
  int ell = 0;        // total users
  double alpha = 0;   // activity probability
  double N0 = 2.0;    // noise spectral density; per-coordinate noise variance N0/2

  // Mean number of active users. Kept real; integer caps floor it.
  double k() const { return alpha * ell; }

  // Throws DomainError when any field is out of range.
  void validate() const;
};

enum class Scheme { joint, ortho };

// Energy budget and its split. For the joint scheme the split fraction is the
// signature share b; for the orthogonal scheme it is the pilot share t, and
// n_sig / n_msg describe one slot (1 pilot symbol, slot_len - 1 message
// positions).
struct EnergySchedule {
  Scheme scheme = Scheme::joint;
  double E = 0;
  double split = 0;
  double c = 0;
  int n_sig = 0;
  int n_msg = 0;
  double E_sig = 0;
  double E_msg = 0;
  int slot_len = 0;  // orthogonal scheme only
};

struct RateSpec {
  std::uint64_t M = 2;
  double R_dot = 0;  // nats per unit energy, ln(M) / E
};

// Entry i is user i's message: 0 = inactive, 1..M otherwise.
using MessageVector = std::vector<int>;

EnergySchedule make_joint_schedule(const SystemParams& params, double b);
EnergySchedule make_ortho_schedule(const SystemParams& params, double t);

// 1 / N0 in nats per unit energy.
double single_user_capacity_pue(double N0);

// Message count closest to exp(R_dot * E), at least 2.
RateSpec rate_from_target(double R_dot, double E);
RateSpec rate_from_messages(std::uint64_t M, double E);

MessageVector sample_messages(const SystemParams& params, int M, Rng& rng);

inline int active_count(const MessageVector& w) {
  int count = 0;
  for (int x : w) count += (x != 0);
  return count;
}

constexpr double kLn2 = 0.69314718055994530942;

inline double nats_to_bits(double nats) { return nats / kLn2; }

}  // namespace mnac
