// mnac: bounds, simulations, sweeps and partition checks for the Gaussian
// random many-access channel.
//
// Exit codes: 0 success, 2 configuration error, 3 complexity budget exceeded,
// 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mnac/bounds.hpp"
#include "mnac/codebooks.hpp"
#include "mnac/converse_partition.hpp"
#include "mnac/errors.hpp"
#include "mnac/harness.hpp"
#include "mnac/json_io.hpp"
#include "mnac/special_functions.hpp"

using namespace mnac;

namespace {

// Accepts inline JSON or @path.
Json parse_params(const std::string& text) {
  if (!text.empty() && text.front() == '@') return load_json_file(text.substr(1));
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid --params JSON: ") + e.what());
  }
}

template <typename T>
T param(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing parameter '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad parameter '") + key + "': " + e.what());
  }
}

template <typename T>
T param_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? param<T>(j, key) : fallback;
}

SystemParams point_params(const Json& j) {
  SystemParams p;
  p.n = param<int>(j, "n");
  p.ell = param<int>(j, "ell");
  p.alpha = param<double>(j, "alpha");
  p.N0 = param_or<double>(j, "N0", 2.0);
  return p;
}

BoundReport scalar_report(const char* name, double value) {
  BoundReport r{name, value, std::isfinite(value), {}};
  return r;
}

BoundReport evaluate_bound(const std::string& name, const Json& j) {
  if (name == "e0_msg") {
    TypeErrorQuery q{param<int>(j, "errors"), param<int>(j, "k_active")};
    return scalar_report("e0_msg", e0_msg(q, param<double>(j, "rho"), param<double>(j, "E_msg"),
                                          param<int>(j, "n_msg"), param_or<double>(j, "N0", 2.0)));
  }
  if (name == "pr_type_error_ub") {
    TypeErrorQuery q{param<int>(j, "errors"), param<int>(j, "k_active")};
    return pr_type_error_ub(q, param<double>(j, "rho"), param<double>(j, "M"), param<double>(j, "E_msg"),
                            param<int>(j, "n_msg"), param_or<double>(j, "N0", 2.0), param_or<double>(j, "mu", 1.0));
  }
  if (name == "decode_error_budget") {
    return decode_error_budget(param<int>(j, "k_active"), param<double>(j, "rho"), param<double>(j, "M"),
                               param<double>(j, "E_msg"), param<int>(j, "n_msg"), param_or<double>(j, "N0", 2.0),
                               param_or<double>(j, "mu", 1.0));
  }
  if (name == "f_msg") {
    TypeErrorQuery q{param<int>(j, "errors"), param<int>(j, "k_active")};
    return scalar_report("f_msg", f_msg(q, param<double>(j, "rho"), param<double>(j, "M"), param<double>(j, "E_msg"),
                                        param<int>(j, "n_msg"), param_or<double>(j, "N0", 2.0)));
  }
  if (name == "detect_exponent_g") {
    return scalar_report("detect_exponent_g",
                         detect_exponent_g(param_or<double>(j, "lambda", 2.0 / 3.0), param_or<double>(j, "rho", 0.75),
                                           param<int>(j, "kappa1"), param<int>(j, "kappa2"), param<int>(j, "d_weight"),
                                           param<int>(j, "ell"), param<int>(j, "n_sig"), param<double>(j, "E_sig")));
  }
  if (name == "detection_budget" || name == "total_error_budget") {
    ExperimentConfig cfg = config_from_json(j);
    const Setup setup = prepare(cfg);
    if (name == "total_error_budget")
      return total_error_budget(cfg.params, setup.sched, cfg.bp, static_cast<double>(setup.rate.M));
    if (cfg.scheme != Scheme::joint) throw ConfigError("detection_budget applies to the joint scheme");
    return detection_budget(cfg.params, setup.sched, cfg.bp, mu_exact(setup.sched.n_sig).value);
  }
  if (name == "gallager_awgn") {
    return gallager_awgn(param<double>(j, "M"), param<int>(j, "n_code"), param<double>(j, "P"),
                         param_or<double>(j, "N0", 2.0), param<double>(j, "rho"));
  }
  if (name == "ortho_code_bound") {
    return ortho_code_bound(param<double>(j, "M"), param<double>(j, "R_dot"), param_or<double>(j, "N0", 2.0));
  }
  if (name == "ortho_user_error") {
    return ortho_user_error(param<double>(j, "M"), param<double>(j, "t"), param<double>(j, "E"),
                            param_or<double>(j, "N0", 2.0));
  }
  if (name == "converse_joint") {
    return converse_joint(point_params(j), param<double>(j, "E"), param_or<double>(j, "Pe", 0.0));
  }
  if (name == "converse_ape") {
    return converse_ape(point_params(j), param<double>(j, "E"), param_or<double>(j, "Pe_A", 0.0));
  }
  if (name == "converse_ortho_user") {
    return converse_ortho_user(param<double>(j, "E"), param<double>(j, "n1"), param_or<double>(j, "N0", 2.0),
                               param_or<double>(j, "P1", 0.0));
  }
  if (name == "joint_error_lb") {
    return joint_error_lb(param<double>(j, "E"), param<double>(j, "ell"), param_or<double>(j, "N0", 2.0),
                          param<double>(j, "alpha"));
  }
  if (name == "birge_bound") {
    return scalar_report("birge_bound", birge_bound(param<std::vector<std::vector<double>>>(j, "kl")));
  }
  if (name == "gaussian_kl") {
    return scalar_report("gaussian_kl", gaussian_kl(param<double>(j, "delta_sq_norm"), param_or<double>(j, "N0", 2.0)));
  }
  if (name == "normal_tail") return normal_tail_report(param<double>(j, "x"));
  if (name == "capacity") {
    const double c = single_user_capacity_pue(param_or<double>(j, "N0", 2.0));
    BoundReport r{"capacity", c, true, {}};
    r.add("nats", c).add("bits", nats_to_bits(c));
    return r;
  }
  throw ConfigError("unknown bound name: " + name);
}

void print_report(const BoundReport& r, const std::string& format) {
  if (format == "json") {
    std::cout << to_json(r).dump(2) << '\n';
    return;
  }
  std::cout << "name,value,valid\n" << r.name << ',';
  std::printf("%.17g", r.value);
  std::cout << ',' << (r.valid ? "true" : "false") << "\n\nterm,value\n";
  for (const auto& [k, v] : r.terms) {
    std::cout << k << ',';
    std::printf("%.17g\n", v);
  }
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<int> threads;

  void apply(ExperimentConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
  }
};

void add_run_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--seed", o.seed, "Master seed (64-bit)");
  sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::NonNegativeNumber);
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian random many-access channel: bounds and Monte Carlo"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::string bound_name, bound_params = "{}";
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a bound by name");
  bounds_cmd->add_option("--name", bound_name, "Bound name")->required();
  bounds_cmd->add_option("--params", bound_params, "Parameters as JSON or @file");

  std::string config_path, trials_csv;
  Overrides sim_over;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one configuration");
  sim_cmd->add_option("--config", config_path, "Config JSON file")->required();
  sim_cmd->add_option("--trials-csv", trials_csv, "Write per-trial records to this CSV file");
  add_run_flags(sim_cmd, sim_over);

  std::string sweep_path;
  Overrides sweep_over;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a growth family over an n grid");
  sweep_cmd->add_option("--spec", sweep_path, "Sweep JSON file")->required();
  add_run_flags(sweep_cmd, sweep_over);

  int p_ell = 5, p_M = 2, p_t = 1;
  bool p_dump = false;
  auto* part_cmd = app.add_subcommand("partition", "Build and verify a type-class partition");
  part_cmd->add_option("--ell", p_ell)->required();
  part_cmd->add_option("--M", p_M)->required();
  part_cmd->add_option("--t", p_t)->required();
  part_cmd->add_flag("--dump", p_dump, "Include the sets themselves");

  std::string family_path;
  std::vector<int> class_grid;
  auto* class_cmd = app.add_subcommand("classify", "Classify a growth family as sub- or superlinear");
  class_cmd->add_option("--family", family_path, "Family or sweep JSON file")->required();
  class_cmd->add_option("--n-grid", class_grid, "Grid (defaults to the file's n_grid)");

  int mu_len = 2;
  std::string mu_method = "all";
  long mu_trials = 1000000;
  std::uint64_t mu_seed = 1;
  auto* mu_cmd = app.add_subcommand("mu", "Truncation normalizer of the Gaussian ensemble");
  mu_cmd->add_option("--len", mu_len)->required()->check(CLI::PositiveNumber);
  mu_cmd->add_option("--method", mu_method)->check(CLI::IsMember({"exact", "chernoff", "mc", "all"}));
  mu_cmd->add_option("--trials", mu_trials)->check(CLI::PositiveNumber);
  mu_cmd->add_option("--seed", mu_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bounds_cmd) {
      print_report(evaluate_bound(bound_name, parse_params(bound_params)), format);
    } else if (*sim_cmd) {
      ExperimentConfig cfg = config_from_json(load_json_file(config_path));
      sim_over.apply(cfg);
      const Setup setup = prepare(cfg);
      std::vector<TrialRecord> records;
      const Summary s = estimate_error(cfg, &records);
      if (!trials_csv.empty()) {
        std::ofstream out(trials_csv);
        if (!out) throw ConfigError("cannot write " + trials_csv);
        write_trials_csv(out, records);
      }
      if (format == "json") std::cout << to_json(s, setup, cfg).dump(2) << '\n';
      else std::cout << summary_csv_header() << '\n' << summary_csv_row(cfg, setup, s) << '\n';
    } else if (*sweep_cmd) {
      SweepSpec spec = sweep_from_json(load_json_file(sweep_path));
      sweep_over.apply(spec.templ);
      const SweepResult r = sweep(spec.family, spec.n_grid, spec.templ, spec.R_dot_fraction);
      if (format == "json") std::cout << to_json(r).dump(2) << '\n';
      else write_sweep_csv(std::cout, r);
    } else if (*part_cmd) {
      const Partition p = build_partition(p_ell, p_M, p_t);
      Json j = to_json(verify_partition(p));
      j["ell"] = p_ell;
      j["M"] = p_M;
      j["t"] = p_t;
      j["set_count"] = p.sets.size();
      j["class_size"] = type_class_size(p_ell, p_M, p_t);
      if (p_dump) j["partition"] = to_json(p);
      std::cout << j.dump(2) << '\n';
    } else if (*class_cmd) {
      const Json file = load_json_file(family_path);
      const bool is_sweep = file.contains("family");
      const GrowthFamily fam = family_from_json(is_sweep ? file.at("family") : file);
      std::vector<int> grid = class_grid;
      if (grid.empty() && is_sweep) grid = file.at("n_grid").get<std::vector<int>>();
      const RegimeVerdict v = classify_regime(fam, grid);
      if (format == "json") std::cout << Json{{"family", fam.name}, {"regime", to_string(v.regime)}, {"slope", v.slope}}.dump(2) << '\n';
      else std::cout << "family,regime,slope\n" << fam.name << ',' << to_string(v.regime) << ',' << v.slope << '\n';
    } else if (*mu_cmd) {
      Json j = Json::object();
      if (mu_method == "exact" || mu_method == "all") j["exact"] = to_json(mu_exact(mu_len));
      if (mu_method == "chernoff" || mu_method == "all") j["chernoff_lb"] = to_json(mu_chernoff_lb(mu_len));
      if (mu_method == "mc" || mu_method == "all") {
        Rng rng(mu_seed, 0);
        j["monte_carlo"] = to_json(mu_monte_carlo(mu_len, mu_trials, rng));
      }
      j["len"] = mu_len;
      std::cout << j.dump(2) << '\n';
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "complexity budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidRegime& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SizeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
