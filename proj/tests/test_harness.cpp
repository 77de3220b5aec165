#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mnac/errors.hpp"
#include "mnac/harness.hpp"
#include "mnac/rng.hpp"

using namespace mnac;

namespace {

ExperimentConfig tiny(long trials) {
  ExperimentConfig cfg;
  cfg.params = {512, 8, 0.25, 2.0};
  cfg.split = 0.5;
  cfg.M = 4;
  cfg.trials = trials;
  cfg.seed = 20240601;
  return cfg;
}

bool same(const TrialRecord& a, const TrialRecord& b) {
  return a.index == b.index && a.seed == b.seed && a.active == b.active && a.detected == b.detected &&
         a.misses == b.misses && a.false_alarms == b.false_alarms && a.aborted == b.aborted &&
         a.stats.joint_error == b.stats.joint_error && a.stats.per_user_errors == b.stats.per_user_errors &&
         a.stats.ape == b.stats.ape && a.stats.overflow == b.stats.overflow;
}

GrowthFamily sub_family() {
  GrowthFamily f;
  f.name = "sub";
  f.ell = {1.0, 1.0 / 3.0, "ceil"};
  f.activity.rule = "fixed_k";
  f.activity.k = 2;
  return f;
}

GrowthFamily sup_family() {
  GrowthFamily f;
  f.name = "sup";
  f.ell = {1.0, 1.0, "ceil"};
  f.activity.rule = "constant";
  f.activity.alpha = 1.0;
  return f;
}

}  // namespace

TEST_CASE("prepare derives the operating point") {
  const auto cfg = tiny(10);
  const Setup s = prepare(cfg);
  CHECK(s.rate.M == 4);
  CHECK(s.overflow_cap == 16);
  CHECK(s.v >= 8);
  CHECK(s.sched.n_sig == 256);

  auto bad = cfg;
  bad.M.reset();
  CHECK_THROWS_AS(prepare(bad), ConfigError);

  auto huge = cfg;
  huge.params = {4096, 64, 0.25, 2.0};
  CHECK_THROWS_AS(prepare(huge), BudgetExceeded);

  ExperimentConfig ortho;
  ortho.scheme = Scheme::ortho;
  ortho.params = {256, 16, 0.25, 2.0};
  ortho.split = 0.5;
  ortho.M = 16;
  CHECK_THROWS_AS(prepare(ortho), ConfigError);
  ortho.M = 15;
  CHECK_NOTHROW(prepare(ortho));
}

TEST_CASE("trials are reproducible") {
  const auto cfg = tiny(1);
  const Setup s = prepare(cfg);
  for (long i : {0L, 1L, 17L}) CHECK(same(run_trial(cfg, s, i), run_trial(cfg, s, i)));
  CHECK(run_trial(cfg, s, 0).seed != run_trial(cfg, s, 1).seed);
}

TEST_CASE("noiseless trials decode perfectly") {
  auto cfg = tiny(60);
  cfg.noiseless = true;
  std::vector<TrialRecord> recs;
  const Summary sum = estimate_error(cfg, &recs);
  CHECK(sum.joint_errors == 0);
  CHECK(sum.detection_errors == 0);
  for (const auto& r : recs) CHECK(r.detected == r.active);

  auto ortho = cfg;
  ortho.scheme = Scheme::ortho;
  ortho.split = 0.5;
  ortho.M = 8;
  CHECK(estimate_error(ortho).joint_errors == 0);
}

TEST_CASE("tiny joint configuration bookkeeping") {
  auto cfg = tiny(200);
  std::vector<TrialRecord> recs;
  const Summary s = estimate_error(cfg, &recs);
  REQUIRE(recs.size() == 200);
  long errors = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    CHECK(r.index == static_cast<long>(i));
    CHECK(r.active + r.false_alarms == r.detected + r.misses);
    if (r.misses + r.false_alarms > 0) CHECK(r.stats.joint_error);
    errors += r.stats.joint_error;
  }
  CHECK(s.joint_errors == errors);
  CHECK(s.joint_err == doctest::Approx(errors / 200.0));
  CHECK(s.joint_err_ci.lo <= s.joint_err);
  CHECK(s.joint_err <= s.joint_err_ci.hi);
  CHECK(s.interval_valid);
  const double sigma = std::sqrt(0.125 * 0.875 / 200);
  CHECK(s.overflow_rate <= 0.125 + 3 * sigma);
  CHECK(s.overflow_within_markov);
}

TEST_CASE("aggregation does not depend on the thread count") {
  auto cfg = tiny(40);
  std::vector<TrialRecord> serial, parallel;
  const Summary a = estimate_error(cfg, &serial);
  cfg.threads = 3;
  const Summary b = estimate_error(cfg, &parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same(serial[i], parallel[i]));
  CHECK(a.joint_errors == b.joint_errors);
  CHECK(a.ape == b.ape);
  CHECK(summary_csv_row(cfg, prepare(cfg), a) == summary_csv_row(cfg, prepare(cfg), b));
  std::ostringstream x, y;
  write_trials_csv(x, serial);
  write_trials_csv(y, parallel);
  CHECK(x.str() == y.str());
}

TEST_CASE("budget overruns") {
  auto cfg = tiny(20);
  cfg.budgets.decode = 4;  // any two active users exceed it
  CHECK_THROWS_AS(estimate_error(cfg), BudgetExceeded);
  cfg.budget_as_error = true;
  std::vector<TrialRecord> recs;
  const Summary s = estimate_error(cfg, &recs);
  CHECK(s.aborted > 0);
  for (const auto& r : recs) {
    if (r.aborted) CHECK(r.stats.joint_error);
    CHECK(r.active + r.false_alarms == r.detected + r.misses);
  }
}

TEST_CASE("Wilson intervals") {
  const auto zero = wilson_interval(0, 100);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
  const auto all = wilson_interval(100, 100);
  CHECK(all.hi == 1.0);
  CHECK(all.lo < 1.0);
  const auto none = wilson_interval(0, 0);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == 1.0);

  Rng rng(99);
  int covered = 0;
  for (int meta = 0; meta < 100; ++meta) {
    long hits = 0;
    for (int i = 0; i < 1000; ++i) hits += rng.bernoulli(0.1);
    const auto ci = wilson_interval(hits, 1000);
    covered += ci.lo <= 0.1 && 0.1 <= ci.hi;
  }
  CHECK(covered >= 93);
}

TEST_CASE("growth families") {
  const auto f = sub_family();
  CHECK(f.at(256, 2.0).ell == 7);
  CHECK(f.at(1024, 2.0).ell == 11);
  CHECK(f.at(4096, 2.0).ell == 16);
  CHECK(f.at(4096, 2.0).k() == doctest::Approx(2.0));
  auto bad = f;
  bad.activity.k = 100;
  CHECK_THROWS_AS(bad.at(256, 2.0), ConfigError);
  bad = f;
  bad.ell.round = "nearest";
  CHECK_THROWS_AS(bad.at(256, 2.0), ConfigError);
}

TEST_CASE("sweeps") {
  ExperimentConfig templ;
  templ.trials = 0;
  const auto sub = sweep(sub_family(), {256, 1024, 4096}, templ, 0.25);
  REQUIRE(sub.rows.size() == 3);
  CHECK(sub.load_decreasing);
  for (const auto& r : sub.rows) {
    CHECK(r.error.empty());
    CHECK(r.setup.has_value());
    CHECK(r.budget.has_value());
    CHECK_FALSE(r.summary.has_value());
  }

  const auto sup = sweep(sup_family(), {1 << 10, 1 << 14, 1 << 18}, templ, 0.25);
  REQUIRE(sup.rows.size() == 3);
  CHECK(sup.converse_decreasing);
  CHECK_FALSE(sup.load_decreasing);
  for (const auto& r : sup.rows) {
    CHECK_FALSE(r.setup.has_value());
    CHECK_FALSE(r.error.empty());
    REQUIRE(r.converse.has_value());
  }
  CHECK(sup.rows[2].converse->value == doctest::Approx(0.10423347755819066).epsilon(1e-12));

  CHECK(sweep(sub_family(), {}, templ, 0.25).rows.empty());

  templ.trials = 5;
  const auto small = sweep(sub_family(), {256}, templ, 0.25);
  REQUIRE(small.rows[0].summary.has_value());
  CHECK(small.rows[0].summary->trials == 5);
  std::ostringstream os;
  write_sweep_csv(os, small);
  CHECK(os.str().find('\n') != std::string::npos);
}

TEST_CASE("regime classification") {
  const std::vector<int> grid = {256, 1024, 4096, 16384};
  CHECK(classify_regime(sub_family(), grid).regime == Regime::sublinear);
  CHECK(classify_regime(sup_family(), grid).regime == Regime::superlinear);

  GrowthFamily boundary;
  boundary.ell = {1.0, 1.0, "ceil"};
  boundary.activity.rule = "k_power_log";
  boundary.activity.coef = 0.1;
  boundary.activity.exponent = 1.0;
  boundary.activity.log_exponent = -1.0;
  const auto v = classify_regime(boundary, grid);
  CHECK(v.regime == Regime::indeterminate);
  CHECK(std::abs(v.slope) < 1e-12);
  CHECK_THROWS_AS(classify_regime(sub_family(), {256, 1024}), ConfigError);
  CHECK(std::string(to_string(Regime::sublinear)) == "sublinear");
}
