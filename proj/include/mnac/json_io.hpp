#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mnac/bounds.hpp"
#include "mnac/codebooks.hpp"
#include "mnac/converse_partition.hpp"
#include "mnac/harness.hpp"

namespace mnac {

using Json = nlohmann::ordered_json;

// {"value", "valid", "terms": {...}}
Json to_json(const BoundReport& r);
Json to_json(const Summary& s, const Setup& setup, const ExperimentConfig& cfg);
Json to_json(const Partition& p);
Json to_json(const PartitionReport& r);
Json to_json(const MuEstimate& m);
Json to_json(const SweepResult& r);

// Config schema:
//   scheme: "joint" | "ortho"; n, ell, alpha, N0 (default 2);
//   b (joint) or t (ortho); one of M, R_dot, R_dot_fraction;
//   optional rho, lambda, xi, trials, seed, epsilon, fixed_codebook,
//   noiseless, budget_as_error, energy_override, detect_budget, decode_budget, threads.
// Unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const Json& j);

// {"name", "ell": {"rule": "power", "coef", "exponent", "round"},
//  "activity": {"rule": "fixed_k" | "constant" | "k_power_log", ...}}
GrowthFamily family_from_json(const Json& j);

struct SweepSpec {
  GrowthFamily family;
  std::vector<int> n_grid;
  ExperimentConfig templ;
  double R_dot_fraction = 0.25;
};

// {"family": {...}, "n_grid": [...], "R_dot_fraction", "config": {...}}
// The config template needs no n, ell, alpha or rate fields.
SweepSpec sweep_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace mnac
