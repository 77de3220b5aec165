#include "mnac/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mnac/errors.hpp"

namespace mnac {

namespace {

// NaN and infinities are not JSON; emit null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T need(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  return get_or<T>(j, key, T{});
}

const std::set<std::string> kConfigKeys = {
    "scheme", "n", "ell", "alpha", "N0", "b", "t", "M", "R_dot", "R_dot_fraction", "rho", "lambda", "xi", "trials",
    "seed", "epsilon", "fixed_codebook", "noiseless", "budget_as_error", "energy_override", "detect_budget", "decode_budget", "threads"};

ExperimentConfig config_fields(const Json& j, bool need_point) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, kConfigKeys, "config");
  ExperimentConfig c;
  const std::string scheme = get_or<std::string>(j, "scheme", "joint");
  if (scheme == "joint") c.scheme = Scheme::joint;
  else if (scheme == "ortho") c.scheme = Scheme::ortho;
  else throw ConfigError("scheme must be 'joint' or 'ortho'");
  if (need_point) {
    c.params.n = need<int>(j, "n");
    c.params.ell = need<int>(j, "ell");
    c.params.alpha = need<double>(j, "alpha");
  }
  c.params.N0 = get_or<double>(j, "N0", 2.0);
  if (c.scheme == Scheme::joint) {
    if (j.contains("t")) throw ConfigError("'t' applies to the ortho scheme; use 'b'");
    c.split = get_or<double>(j, "b", 0.5);
  } else {
    if (j.contains("b")) throw ConfigError("'b' applies to the joint scheme; use 't'");
    c.split = get_or<double>(j, "t", 0.25);
  }
  const int rate_keys = j.contains("M") + j.contains("R_dot") + j.contains("R_dot_fraction");
  if (need_point && rate_keys != 1) throw ConfigError("give exactly one of M, R_dot, R_dot_fraction");
  if (j.contains("M")) c.M = need<std::uint64_t>(j, "M");
  if (j.contains("R_dot")) c.R_dot = need<double>(j, "R_dot");
  if (j.contains("R_dot_fraction")) c.R_dot_fraction = need<double>(j, "R_dot_fraction");
  if (j.contains("energy_override")) c.energy_override = need<double>(j, "energy_override");
  c.bp.rho = get_or<double>(j, "rho", c.bp.rho);
  c.bp.lambda = get_or<double>(j, "lambda", c.bp.lambda);
  c.bp.xi = get_or<int>(j, "xi", c.bp.xi);
  c.trials = get_or<long>(j, "trials", c.trials);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.epsilon = get_or<double>(j, "epsilon", c.epsilon);
  c.fixed_codebook = get_or<bool>(j, "fixed_codebook", false);
  c.noiseless = get_or<bool>(j, "noiseless", false);
  c.budget_as_error = get_or<bool>(j, "budget_as_error", false);
  c.budgets.detect = get_or<double>(j, "detect_budget", c.budgets.detect);
  c.budgets.decode = get_or<double>(j, "decode_budget", c.budgets.decode);
  c.threads = get_or<int>(j, "threads", 1);
  if (c.trials < 0) throw ConfigError("trials must be nonnegative");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  return c;
}

}  // namespace

Json to_json(const BoundReport& r) {
  Json terms = Json::object();
  for (const auto& [k, v] : r.terms) terms[k] = number(v);
  return Json{{"name", r.name}, {"value", number(r.value)}, {"valid", r.valid}, {"terms", terms}};
}

Json to_json(const Summary& s, const Setup& setup, const ExperimentConfig& cfg) {
  Json j;
  j["scheme"] = cfg.scheme == Scheme::joint ? "joint" : "ortho";
  j["n"] = cfg.params.n;
  j["ell"] = cfg.params.ell;
  j["alpha"] = cfg.params.alpha;
  j["k"] = cfg.params.k();
  j["N0"] = cfg.params.N0;
  j["seed"] = cfg.seed;
  j["schedule"] = {{"E", setup.sched.E},         {"c", setup.sched.c},         {"split", setup.sched.split},
                   {"n_sig", setup.sched.n_sig}, {"n_msg", setup.sched.n_msg}, {"E_sig", setup.sched.E_sig},
                   {"E_msg", setup.sched.E_msg}, {"slot_len", setup.sched.slot_len}};
  j["M"] = setup.rate.M;
  j["R_dot_nats"] = setup.rate.R_dot;
  j["R_dot_bits"] = nats_to_bits(setup.rate.R_dot);
  j["capacity_nats"] = single_user_capacity_pue(cfg.params.N0);
  j["v"] = setup.v;
  j["overflow_cap"] = setup.overflow_cap;
  j["trials"] = s.trials;
  j["joint_err"] = s.joint_err;
  j["joint_err_ci"] = {s.joint_err_ci.lo, s.joint_err_ci.hi};
  j["ape"] = s.ape;
  j["overflow_rate"] = s.overflow_rate;
  j["overflow_ci"] = {s.overflow_ci.lo, s.overflow_ci.hi};
  j["overflow_within_markov"] = s.overflow_within_markov;
  j["detection_error_rate"] = s.trials ? static_cast<double>(s.detection_errors) / s.trials : 0.0;
  j["aborted_trials"] = s.aborted;
  j["interval_valid"] = s.interval_valid;
  j["epsilon"] = cfg.epsilon;
  j["meets_epsilon"] = s.joint_err_ci.hi <= cfg.epsilon;
  j["budget"] = to_json(s.budget);
  return j;
}

Json to_json(const Partition& p) {
  Json sets = Json::array();
  for (const auto& s : p.sets) sets.push_back({{"center", s.center}, {"members", s.members}});
  return Json{{"ell", p.ell}, {"M", p.M}, {"t", p.t}, {"sets", sets}};
}

Json to_json(const PartitionReport& r) {
  Json sets = Json::array();
  for (const auto& s : r.sets) sets.push_back({{"size", s.size}, {"diameter", s.diameter}, {"center_radius", s.center_radius}});
  return Json{{"passed", r.passed()},
              {"disjoint", r.disjoint},
              {"covers", r.covers},
              {"sizes_ok", r.sizes_ok},
              {"diameters_ok", r.diameters_ok},
              {"centers_separated", r.centers_separated},
              {"min_size", r.min_size},
              {"max_diameter", r.max_diameter},
              {"sets", sets}};
}

Json to_json(const MuEstimate& m) {
  Json j{{"value", m.value}, {"method", to_string(m.method)}};
  if (m.method == MuMethod::monte_carlo) j["stderr"] = m.stderr_;
  return j;
}

Json to_json(const SweepResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"n", row.n}, {"ell", row.params.ell}, {"alpha", row.params.alpha}, {"k", row.params.k()}};
    if (row.setup) {
      j["E"] = row.setup->sched.E;
      j["M"] = row.setup->rate.M;
      j["R_dot_nats"] = row.setup->rate.R_dot;
      j["R_dot_bits"] = nats_to_bits(row.setup->rate.R_dot);
    }
    if (row.summary) {
      j["joint_err"] = row.summary->joint_err;
      j["joint_err_ci"] = {row.summary->joint_err_ci.lo, row.summary->joint_err_ci.hi};
      j["ape"] = row.summary->ape;
      j["overflow_rate"] = row.summary->overflow_rate;
    }
    if (row.budget) j["budget"] = to_json(*row.budget);
    if (row.converse) j["converse_joint"] = to_json(*row.converse);
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(j);
  }
  return Json{{"rows", rows},
              {"trends",
               {{"load_decreasing", r.load_decreasing},
                {"joint_err_nonincreasing", r.joint_err_nonincreasing},
                {"budget_decreasing", r.budget_decreasing},
                {"converse_decreasing", r.converse_decreasing}}}};
}

ExperimentConfig config_from_json(const Json& j) { return config_fields(j, true); }

GrowthFamily family_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("family must be a JSON object");
  reject_unknown(j, {"name", "ell", "activity"}, "family");
  GrowthFamily f;
  f.name = get_or<std::string>(j, "name", "family");
  const Json& e = j.contains("ell") ? j.at("ell") : throw ConfigError("family needs 'ell'");
  reject_unknown(e, {"rule", "coef", "exponent", "round"}, "family.ell");
  if (get_or<std::string>(e, "rule", "power") != "power") throw ConfigError("ell rule must be 'power'");
  f.ell.coef = get_or<double>(e, "coef", 1.0);
  f.ell.exponent = get_or<double>(e, "exponent", 1.0);
  f.ell.round = get_or<std::string>(e, "round", "ceil");
  const Json& a = j.contains("activity") ? j.at("activity") : throw ConfigError("family needs 'activity'");
  reject_unknown(a, {"rule", "k", "alpha", "coef", "exponent", "log_exponent"}, "family.activity");
  f.activity.rule = need<std::string>(a, "rule");
  f.activity.k = get_or<double>(a, "k", 1.0);
  f.activity.alpha = get_or<double>(a, "alpha", 1.0);
  f.activity.coef = get_or<double>(a, "coef", 1.0);
  f.activity.exponent = get_or<double>(a, "exponent", 0.0);
  f.activity.log_exponent = get_or<double>(a, "log_exponent", 0.0);
  return f;
}

SweepSpec sweep_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("sweep file must be a JSON object");
  reject_unknown(j, {"family", "n_grid", "R_dot_fraction", "config"}, "sweep");
  SweepSpec s;
  s.family = family_from_json(j.contains("family") ? j.at("family") : throw ConfigError("sweep needs 'family'"));
  s.n_grid = get_or<std::vector<int>>(j, "n_grid", {});
  s.R_dot_fraction = get_or<double>(j, "R_dot_fraction", 0.25);
  s.templ = config_fields(j.contains("config") ? j.at("config") : Json::object(), false);
  return s;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace mnac
