#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mnac/codebooks.hpp"
#include "mnac/system_model.hpp"

namespace mnac {

using ActivityVector = std::vector<std::uint8_t>;

struct DetectionResult {
  ActivityVector d_hat;
  int misses = 0;        // filled by the caller once the truth is known
  int false_alarms = 0;
  double residual = 0;   // ||Y - S d_hat||^2, recomputed directly
};

inline constexpr double kDefaultDetectBudget = 1e7;

// floor(k (1 + c)): the largest activity weight the detector considers.
int v_cap(const SystemParams& params, const EnergySchedule& sched);

// Number of candidates an exhaustive search over weights 0..v visits.
double ls_candidate_count(int ell, int v);

// argmin of ||Y - S d||^2 over binary d with |d| <= v, the empty pattern
// included. Ties go to the smaller weight, then to the lexicographically
// smaller sorted index list.
DetectionResult detect_ls_exhaustive(std::span<const double> y_sig, const SignatureMatrix& S, int v,
                                     double budget = kDefaultDetectBudget);

// Pilot threshold: active iff y > sqrt(tE) / 2.
bool detect_pilot(double y_pilot, double t, double E);

// (misses, false alarms).
std::pair<int, int> detection_stats(const ActivityVector& d_true, const ActivityVector& d_hat);

ActivityVector activity_of(const MessageVector& w);

inline int weight(const ActivityVector& d) {
  int c = 0;
  for (auto b : d) c += b;
  return c;
}

}  // namespace mnac
