#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mnac/bounds.hpp"
#include "mnac/message_decoding.hpp"
#include "mnac/system_model.hpp"

namespace mnac {

struct ExperimentConfig {
  Scheme scheme = Scheme::joint;
  SystemParams params;
  double split = 0.5;  // signature share b (joint) or pilot share t (ortho)
  // Exactly one of the three rate inputs is used, in this order.
  std::optional<std::uint64_t> M;
  std::optional<double> R_dot;           // nats per unit energy
  std::optional<double> R_dot_fraction;  // of the single-user value 1/N0
  std::optional<double> energy_override;  // replaces E, keeping the split
  BoundParams bp;
  long trials = 100;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  bool fixed_codebook = false;
  bool noiseless = false;
  // When a trial's exhaustive search would exceed its budget: false aborts the
  // run with BudgetExceeded, true scores the trial as a receiver failure.
  bool budget_as_error = false;
  ReceiverBudgets budgets;
  int threads = 1;
};

// Quantities derived once per configuration.
struct Setup {
  EnergySchedule sched;
  RateSpec rate;
  int v = 0;             // detector weight cap (joint)
  int overflow_cap = 0;  // floor(xi k)
};

Setup prepare(const ExperimentConfig& cfg);

struct TrialRecord {
  long index = 0;
  std::uint64_t seed = 0;
  int active = 0;
  int detected = 0;
  int misses = 0;
  int false_alarms = 0;
  bool aborted = false;  // search budget exceeded, scored as a failure
  ErrorStats stats;
  double wall_ms = 0;
};

// Trial seed = derive_seed(master, index). Codebooks and signatures are drawn
// fresh from the trial seed unless cfg.fixed_codebook, in which case they come
// from the master seed and repeat across trials.
TrialRecord run_trial(const ExperimentConfig& cfg, const Setup& setup, long index);

struct Interval {
  double lo = 0;
  double hi = 1;
};

// Wilson score interval for `successes` out of `n` at normal quantile z.
Interval wilson_interval(long successes, long n, double z = 1.959963984540054);

struct Summary {
  long trials = 0;
  long joint_errors = 0;
  double joint_err = 0;
  Interval joint_err_ci;
  double ape = 0;
  long overflows = 0;
  double overflow_rate = 0;
  Interval overflow_ci;
  long detection_errors = 0;  // trials with any miss or false alarm
  long aborted = 0;
  bool interval_valid = false;  // at least 30 trials
  BoundReport budget;
  bool overflow_within_markov = true;  // Wilson z=3 lower limit <= 1/xi
};

// Runs cfg.trials trials over cfg.threads workers; records come back in index
// order and the aggregate does not depend on the thread count.
Summary estimate_error(const ExperimentConfig& cfg, std::vector<TrialRecord>* records = nullptr);

// Fixed-column reports.
std::string summary_csv_header();
std::string summary_csv_row(const ExperimentConfig& cfg, const Setup& setup, const Summary& s);
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);

struct EllRule {
  double coef = 1;
  double exponent = 1;
  std::string round = "ceil";  // ceil | floor | round
};

struct ActivityRule {
  std::string rule = "fixed_k";  // fixed_k | constant | k_power_log
  double k = 1;
  double alpha = 1;
  double coef = 1;
  double exponent = 0;
  double log_exponent = 0;
};

// ell(n) = round(coef n^exponent); activity from `activity`.
struct GrowthFamily {
  std::string name;
  EllRule ell;
  ActivityRule activity;

  SystemParams at(int n, double N0) const;
};

struct SweepRow {
  int n = 0;
  SystemParams params;
  std::optional<Setup> setup;
  std::optional<Summary> summary;
  std::optional<BoundReport> budget;
  std::optional<BoundReport> converse;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool load_decreasing = true;       // k ln(ell) / n
  bool joint_err_nonincreasing = true;
  bool budget_decreasing = true;
  bool converse_decreasing = true;
};

// Per grid point: schedule, rate at R_dot_fraction / N0, bounds, and a
// simulation when templ.trials > 0. Failures are stored per row.
SweepResult sweep(const GrowthFamily& family, const std::vector<int>& n_grid, const ExperimentConfig& templ,
                  double R_dot_fraction);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

enum class Regime { sublinear, superlinear, indeterminate };
const char* to_string(Regime r);

struct RegimeVerdict {
  Regime regime = Regime::indeterminate;
  double slope = 0;
};

inline constexpr double kRegimeTolerance = 0.02;

// Least-squares slope of ln(k ln(ell) / n) against ln n.
RegimeVerdict classify_regime(const GrowthFamily& family, const std::vector<int>& n_grid);

}  // namespace mnac
