#include "mnac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "mnac/activity_detection.hpp"
#include "mnac/channel.hpp"
#include "mnac/codebooks.hpp"
#include "mnac/errors.hpp"
#include "mnac/rng.hpp"

namespace mnac {

Setup prepare(const ExperimentConfig& cfg) {
  cfg.params.validate();
  cfg.bp.validate();
  if (cfg.trials < 0) throw ConfigError("trials must be nonnegative");
  Setup s;
  s.sched = cfg.scheme == Scheme::joint ? make_joint_schedule(cfg.params, cfg.split)
                                        : make_ortho_schedule(cfg.params, cfg.split);
  if (cfg.energy_override) {
    if (!(*cfg.energy_override > 0.0)) throw ConfigError("energy_override must be positive");
    s.sched.E = *cfg.energy_override;
    s.sched.E_sig = cfg.split * s.sched.E;
    s.sched.E_msg = s.sched.E - s.sched.E_sig;
  }
  if (cfg.M) {
    s.rate = rate_from_messages(*cfg.M, s.sched.E);
  } else if (cfg.R_dot) {
    s.rate = rate_from_target(*cfg.R_dot, s.sched.E);
  } else if (cfg.R_dot_fraction) {
    s.rate = rate_from_target(*cfg.R_dot_fraction * single_user_capacity_pue(cfg.params.N0), s.sched.E);
  } else {
    throw ConfigError("one of M, R_dot, R_dot_fraction is required");
  }
  if (s.rate.M > static_cast<std::uint64_t>(INT_MAX)) throw ConfigError("message count too large to simulate");
  if (cfg.scheme == Scheme::ortho && s.rate.M + 1 > static_cast<std::uint64_t>(s.sched.slot_len))
    throw ConfigError("PPM needs slot_len >= M + 1");
  if (cfg.scheme == Scheme::joint) {
    s.v = v_cap(cfg.params, s.sched);
    if (ls_candidate_count(cfg.params.ell, s.v) > cfg.budgets.detect)
      throw BudgetExceeded("exhaustive detection exceeds its candidate budget");
  }
  s.overflow_cap = static_cast<int>(std::floor(cfg.bp.xi * cfg.params.k()));
  return s;
}

TrialRecord run_trial(const ExperimentConfig& cfg, const Setup& setup, long index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
  const std::uint64_t code_seed = cfg.fixed_codebook ? cfg.seed : rec.seed;
  const int M = static_cast<int>(setup.rate.M);

  Rng msg_rng(rec.seed, kStreamMessages);
  const MessageVector w = sample_messages(cfg.params, M, msg_rng);
  rec.active = active_count(w);

  MessageVector w_hat;
  bool overflow = false;
  if (cfg.scheme == Scheme::joint) {
    Rng sig_rng(code_seed, kStreamSignatures);
    SignatureMatrix S = gen_signatures(cfg.params.ell, setup.sched.n_sig, setup.sched.E_sig, sig_rng);
    const TransmissionPlan plan = TransmissionPlan::joint(cfg.params.n, M, setup.sched, std::move(S), code_seed);
    Signal y = transmit_joint(plan, w);
    if (!cfg.noiseless) {
      Rng noise_rng(rec.seed, kStreamNoise);
      y = awgn(std::move(y), cfg.params.N0, noise_rng);
    }
    ReceiveResult rr;
    try {
      rr = two_phase_receive(y, plan, cfg.params, setup.sched, cfg.bp, cfg.budgets);
    } catch (const BudgetExceeded&) {
      if (!cfg.budget_as_error) throw;
      // Detection always fits the budget (prepare checks it), so only decoding
      // lands here; rerun detection to fill in the activity statistics.
      rr.detection = detect_ls_exhaustive(std::span<const double>(y).subspan(0, plan.n_sig()), plan.signatures(),
                                          setup.v, cfg.budgets.detect);
      rr.w_hat.assign(cfg.params.ell, 0);
      rec.aborted = true;
    }
    const auto [misses, fas] = detection_stats(activity_of(w), rr.detection.d_hat);
    rec.misses = misses;
    rec.false_alarms = fas;
    rec.detected = weight(rr.detection.d_hat);
    overflow = rr.overflow;
    w_hat = std::move(rr.w_hat);
  } else {
    const TransmissionPlan plan = TransmissionPlan::ortho(cfg.params.n, cfg.params.ell, M, setup.sched);
    Signal y = transmit_ortho(plan, w);
    if (!cfg.noiseless) {
      Rng noise_rng(rec.seed, kStreamNoise);
      y = awgn(std::move(y), cfg.params.N0, noise_rng);
    }
    w_hat = ortho_receive(y, plan, cfg.params, setup.sched);
    const auto [misses, fas] = detection_stats(activity_of(w), activity_of(w_hat));
    rec.misses = misses;
    rec.false_alarms = fas;
    rec.detected = active_count(w_hat);
  }
  rec.stats = score_errors(w, w_hat, overflow || rec.aborted);
  rec.stats.overflow = overflow;
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Interval wilson_interval(long successes, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * static_cast<double>(n)));
  // The endpoints are exact at 0 and n; rounding would otherwise leave ~1e-18.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

Summary estimate_error(const ExperimentConfig& cfg, std::vector<TrialRecord>* records) {
  const Setup setup = prepare(cfg);
  std::vector<TrialRecord> recs(cfg.trials);
  const int threads = static_cast<int>(std::max(1L, std::min<long>(cfg.threads, cfg.trials)));
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> failures(threads);
  auto worker = [&](int id) {
    try {
      for (long i = next++; i < cfg.trials; i = next++) recs[i] = run_trial(cfg, setup, i);
    } catch (...) {
      failures[id] = std::current_exception();
      next = cfg.trials;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Summary s;
  s.trials = cfg.trials;
  double ape_sum = 0.0;
  for (const auto& r : recs) {
    s.joint_errors += r.stats.joint_error;
    s.overflows += r.stats.overflow;
    s.detection_errors += (r.misses + r.false_alarms) > 0;
    s.aborted += r.aborted;
    ape_sum += r.stats.ape;
  }
  if (s.trials > 0) {
    s.joint_err = static_cast<double>(s.joint_errors) / s.trials;
    s.overflow_rate = static_cast<double>(s.overflows) / s.trials;
    s.ape = ape_sum / s.trials;
  }
  s.joint_err_ci = wilson_interval(s.joint_errors, s.trials);
  s.overflow_ci = wilson_interval(s.overflows, s.trials);
  s.interval_valid = s.trials >= 30;
  s.overflow_within_markov = wilson_interval(s.overflows, s.trials, 3.0).lo <= 1.0 / cfg.bp.xi;
  try {
    s.budget = total_error_budget(cfg.params, setup.sched, cfg.bp, static_cast<double>(setup.rate.M));
  } catch (const BudgetExceeded&) {
    s.budget = {"total_error_budget", std::nan(""), false, {}};
  }
  if (records) *records = std::move(recs);
  return s;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string summary_csv_header() {
  return "n,ell,alpha,k,E,R_dot_nats,R_dot_bits,joint_err,joint_err_ci_lo,joint_err_ci_hi,ape,overflow_rate,"
         "budget_total,budget_valid";
}

std::string summary_csv_row(const ExperimentConfig& cfg, const Setup& setup, const Summary& s) {
  const auto& p = cfg.params;
  std::string row = std::to_string(p.n) + ',' + std::to_string(p.ell) + ',' + fmt(p.alpha) + ',' + fmt(p.k()) + ',' +
                    fmt(setup.sched.E) + ',' + fmt(setup.rate.R_dot) + ',' + fmt(nats_to_bits(setup.rate.R_dot)) + ',';
  row += fmt(s.joint_err) + ',' + fmt(s.joint_err_ci.lo) + ',' + fmt(s.joint_err_ci.hi) + ',' + fmt(s.ape) + ',' +
         fmt(s.overflow_rate) + ',' + fmt(s.budget.value) + ',' + (s.budget.valid ? "true" : "false");
  return row;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "index,seed,active,detected,misses,false_alarms,overflow,aborted,joint_error,per_user_errors,ape\n";
  for (const auto& r : records) {
    os << r.index << ',' << r.seed << ',' << r.active << ',' << r.detected << ',' << r.misses << ',' << r.false_alarms
       << ',' << r.stats.overflow << ',' << r.aborted << ',' << r.stats.joint_error << ',' << r.stats.per_user_errors << ','
       << fmt(r.stats.ape) << '\n';
  }
}

SystemParams GrowthFamily::at(int n, double N0) const {
  if (n < 2) throw ConfigError("family grid needs n >= 2");
  const double raw = ell.coef * std::pow(static_cast<double>(n), ell.exponent);
  // Snap values within rounding noise of an integer, so 4096^(1/3) gives 16.
  const double snapped = std::abs(raw - std::round(raw)) < 1e-9 * std::max(1.0, raw) ? std::round(raw) : raw;
  double ell_value;
  if (ell.round == "ceil") ell_value = std::ceil(snapped);
  else if (ell.round == "floor") ell_value = std::floor(snapped);
  else if (ell.round == "round") ell_value = std::round(snapped);
  else throw ConfigError("unknown ell rounding rule: " + ell.round);

  SystemParams p;
  p.n = n;
  p.ell = static_cast<int>(std::max(1.0, ell_value));
  p.N0 = N0;
  const double log_n = std::log(static_cast<double>(n));
  if (activity.rule == "fixed_k") {
    p.alpha = activity.k / p.ell;
  } else if (activity.rule == "constant") {
    p.alpha = activity.alpha;
  } else if (activity.rule == "k_power_log") {
    const double k = activity.coef * std::pow(static_cast<double>(n), activity.exponent) *
                     std::pow(log_n, activity.log_exponent);
    p.alpha = k / p.ell;
  } else {
    throw ConfigError("unknown activity rule: " + activity.rule);
  }
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw ConfigError("family gives alpha outside (0, 1] at n = " + std::to_string(n));
  return p;
}

SweepResult sweep(const GrowthFamily& family, const std::vector<int>& n_grid, const ExperimentConfig& templ,
                  double R_dot_fraction) {
  SweepResult out;
  for (int n : n_grid) {
    SweepRow row;
    row.n = n;
    try {
      row.params = family.at(n, templ.params.N0);
      ExperimentConfig cfg = templ;
      cfg.params = row.params;
      cfg.M.reset();
      cfg.R_dot.reset();
      cfg.R_dot_fraction = R_dot_fraction;
      double converse_energy = std::log(static_cast<double>(n));
      try {
        row.setup = prepare(cfg);
        converse_energy = row.setup->sched.E;
        row.budget = total_error_budget(cfg.params, row.setup->sched, cfg.bp, static_cast<double>(row.setup->rate.M));
        if (cfg.trials > 0) row.summary = estimate_error(cfg);
      } catch (const BudgetExceeded& e) {
        row.error = std::string("complexity budget: ") + e.what();
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      row.converse = converse_joint(row.params, converse_energy, 0.0);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }

  const SweepRow* prev_load = nullptr;
  const SweepRow* prev_sim = nullptr;
  const SweepRow* prev_budget = nullptr;
  const SweepRow* prev_conv = nullptr;
  auto load = [](const SweepRow& r) { return r.params.k() * std::log(static_cast<double>(r.params.ell)) / r.n; };
  for (const auto& r : out.rows) {
    if (r.params.n > 0) {
      if (prev_load && !(load(r) < load(*prev_load))) out.load_decreasing = false;
      prev_load = &r;
    }
    if (r.summary) {
      if (prev_sim && r.summary->joint_err > prev_sim->summary->joint_err) out.joint_err_nonincreasing = false;
      prev_sim = &r;
    }
    if (r.budget) {
      if (prev_budget && !(r.budget->value < prev_budget->budget->value)) out.budget_decreasing = false;
      prev_budget = &r;
    }
    if (r.converse) {
      if (prev_conv && !(r.converse->value < prev_conv->converse->value)) out.converse_decreasing = false;
      prev_conv = &r;
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << summary_csv_header() << '\n';
  for (const auto& r : result.rows) {
    const auto& p = r.params;
    os << r.n << ',' << p.ell << ',' << fmt(p.alpha) << ',' << fmt(p.k()) << ',';
    if (r.setup) {
      os << fmt(r.setup->sched.E) << ',' << fmt(r.setup->rate.R_dot) << ',' << fmt(nats_to_bits(r.setup->rate.R_dot))
         << ',';
    } else {
      os << ",,,";
    }
    if (r.summary) {
      const auto& s = *r.summary;
      os << fmt(s.joint_err) << ',' << fmt(s.joint_err_ci.lo) << ',' << fmt(s.joint_err_ci.hi) << ',' << fmt(s.ape)
         << ',' << fmt(s.overflow_rate) << ',';
    } else {
      os << ",,,,,";
    }
    if (r.budget) os << fmt(r.budget->value) << ',' << (r.budget->valid ? "true" : "false");
    else os << ',';
    os << '\n';
  }
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::sublinear: return "sublinear";
    case Regime::superlinear: return "superlinear";
    case Regime::indeterminate: return "indeterminate";
  }
  return "?";
}

RegimeVerdict classify_regime(const GrowthFamily& family, const std::vector<int>& n_grid) {
  if (n_grid.size() < 3) throw ConfigError("regime classification needs at least 3 grid points");
  std::vector<double> xs, ys;
  for (int n : n_grid) {
    const SystemParams p = family.at(n, 1.0);
    if (p.ell < 2) throw DomainError("ell must be >= 2 for the load k ln(ell) / n");
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(p.k() * std::log(static_cast<double>(p.ell)) / n));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("regime classification needs distinct n values");
  RegimeVerdict v;
  v.slope = sxy / sxx;
  if (v.slope < -kRegimeTolerance) v.regime = Regime::sublinear;
  else if (v.slope > kRegimeTolerance) v.regime = Regime::superlinear;
  return v;
}

}  // namespace mnac
