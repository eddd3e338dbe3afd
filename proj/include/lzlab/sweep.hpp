#pragma once

#include "lzlab/config.hpp"

#include <string>
#include <vector>

namespace lzlab {

// One grid point. Undefined columns hold NaN; a failed point keeps its message in `error`.
struct SweepRow {
    double epsilon = 0.0, h = 0.0, mu = 0.0;
    double P_ode, P_nonadiabatic, P_adiabatic, C_n, alpha, unitarity_defect;
    double runtime_s = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string config_hash;
    std::string version;
    std::string potential;
    bool from_cache = false;
};

const char* lzlab_version();

SweepRow evaluate_point(const Potential& p, const ExperimentConfig& cfg, double eps, double h);

// Reference implementation: one point after another.
SweepResult run_sweep_serial(const ExperimentConfig& cfg);

// Points in parallel (threads <= 0: OpenMP default), merged in grid order.
SweepResult run_sweep_parallel(const ExperimentConfig& cfg, int threads);

struct SweepOptions {
    int threads = 0;
    bool force = false;     // ignore an existing cache entry
    bool use_cache = true;
};

// Parallel sweep with the cache at <out_dir>/cache/<hash>.json.
SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& opt = {});

nlohmann::json to_json(const SweepResult& r);
SweepResult sweep_from_json(const nlohmann::json& j);

}  // namespace lzlab
