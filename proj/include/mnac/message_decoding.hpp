#pragma once

#include <span>
#include <vector>

#include "mnac/activity_detection.hpp"
#include "mnac/channel.hpp"
#include "mnac/system_model.hpp"

namespace mnac {

struct BoundParams {
  double rho = 0.75;
  double lambda = 2.0 / 3.0;
  int xi = 8;

  void validate() const;
};

struct ErrorStats {
  bool joint_error = false;
  int per_user_errors = 0;
  double ape = 0;
  bool overflow = false;
};

inline constexpr double kDefaultDecodeBudget = 1e7;

// ML over PPM words given the user is active: argmax of y[w] for w in 1..M,
// ties to the smallest index.
int decode_ppm(std::span<const double> y_slot, int M, double t, double E);

// Exhaustive ML over all message tuples of the listed users; returns one
// message per entry of `active`, in the same order. Ties go to the
// lexicographically smallest tuple.
std::vector<int> decode_joint_ml(std::span<const double> y_msg, const TransmissionPlan& plan,
                                 const std::vector<int>& active, double budget = kDefaultDecodeBudget);

struct ReceiveResult {
  MessageVector w_hat;
  DetectionResult detection;
  bool overflow = false;
};

struct ReceiverBudgets {
  double detect = kDefaultDetectBudget;
  double decode = kDefaultDecodeBudget;
};

// Detect on the first n_sig samples, abort with overflow when more than
// floor(xi k) users are detected, else decode every detected user. A detected
// user is always assigned some message in 1..M, so a false alarm is a message
// error for that user.
ReceiveResult two_phase_receive(std::span<const double> y, const TransmissionPlan& plan, const SystemParams& params,
                                const EnergySchedule& sched, const BoundParams& bp, ReceiverBudgets budgets = {});

MessageVector ortho_receive(std::span<const double> y, const TransmissionPlan& plan, const SystemParams& params,
                            const EnergySchedule& sched);

// With overflow set, the block counts as a joint error and every truly active
// user counts as undelivered.
ErrorStats score_errors(const MessageVector& w_true, const MessageVector& w_hat, bool overflow);

}  // namespace mnac
