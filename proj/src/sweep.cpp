#include "lzlab/sweep.hpp"

#include "lzlab/asymptotics.hpp"
#include "lzlab/error.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace lzlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void note(std::string& msg, const std::string& what)
{
    if (!msg.empty()) msg += "; ";
    msg += what;
}

nlohmann::json number_or_null(double x)
{
    if (std::isfinite(x)) return x;
    return nullptr;
}

double number_from(const nlohmann::json& j)
{
    return j.is_number() ? j.get<double>() : kNaN;
}

SweepResult empty_result(const ExperimentConfig& cfg, const Potential& p)
{
    SweepResult r;
    r.config_hash = cfg.hash();
    r.version = lzlab_version();
    r.potential = p.description();
    return r;
}

}  // namespace

const char* lzlab_version() { return "0.1.0"; }

SweepRow evaluate_point(const Potential& p, const ExperimentConfig& cfg, double eps, double h)
{
    const auto start = std::chrono::steady_clock::now();
    SweepRow row;
    row.epsilon = eps;
    row.h = h;
    row.mu = eps * eps / h;
    row.P_ode = row.P_nonadiabatic = row.P_adiabatic = row.C_n = row.alpha = row.unitarity_defect = kNaN;

    const RegimeParams rp{eps, h};
    try {
        ScatteringOptions o;
        o.tol = cfg.ode_tol;
        const auto s = transition_probability(p, rp, o);
        row.P_ode = s.probability;
        row.unitarity_defect = s.unitarity_defect;
    } catch (const LabError& e) {
        note(row.error, std::string("ode: ") + e.what());
    }

    Regime regime = rp.regime(cfg.thresholds);
    RegimeThresholds th = cfg.thresholds;
    if (cfg.regime != "auto") {
        regime = cfg.regime == "nonadiabatic" ? Regime::nonadiabatic
                 : cfg.regime == "adiabatic"  ? Regime::adiabatic
                                              : Regime::critical;
        th.mu0 = th.adiabatic0 = std::numeric_limits<double>::infinity();
    }
    try {
        if (p.crossing_count() > 0) row.C_n = prefactor_Cn(p, h);
        if (regime == Regime::nonadiabatic) row.P_nonadiabatic = predict_nonadiabatic(p, eps, h, th).value;
    } catch (const LabError& e) {
        note(row.error, std::string("nonadiabatic: ") + e.what());
    }
    if (eps > 0.0 && p.crossing_count() > 0) {
        try {
            const auto g = compute_geometry(p, eps);
            row.alpha = alpha_and_K(g).alpha;
            if (regime == Regime::adiabatic) row.P_adiabatic = predict_adiabatic(g, h, th).value;
        } catch (const LabError& e) {
            note(row.error, std::string("geometry: ") + e.what());
        }
    }
    if (!cfg.zero_runtime)
        row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SweepResult run_sweep_serial(const ExperimentConfig& cfg)
{
    const Potential p = build_potential(cfg.potential);
    SweepResult r = empty_result(cfg, p);
    for (const auto& pt : cfg.grid()) r.rows.push_back(evaluate_point(p, cfg, pt.epsilon, pt.h));
    return r;
}

SweepResult run_sweep_parallel(const ExperimentConfig& cfg, int threads)
{
    const Potential p = build_potential(cfg.potential);
    SweepResult r = empty_result(cfg, p);
    const auto grid = cfg.grid();
    r.rows.resize(grid.size());
    const int n = static_cast<int>(grid.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
    // Rows land in their grid slot, so the merge order does not depend on scheduling.
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (int i = 0; i < n; ++i) r.rows[i] = evaluate_point(p, cfg, grid[i].epsilon, grid[i].h);
    return r;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& opt)
{
    namespace fs = std::filesystem;
    const fs::path cache = fs::path(cfg.out_dir) / "cache" / (cfg.hash() + ".json");
    if (opt.use_cache && !opt.force && fs::exists(cache)) {
        std::ifstream in(cache);
        nlohmann::json j;
        try {
            in >> j;
            SweepResult r = sweep_from_json(j);
            if (r.config_hash == cfg.hash()) {
                r.from_cache = true;
                return r;
            }
        } catch (const nlohmann::json::exception&) {
            // unreadable cache entry: recompute and overwrite it
        }
    }
    SweepResult r = run_sweep_parallel(cfg, opt.threads);
    if (opt.use_cache) {
        std::error_code ec;
        fs::create_directories(cache.parent_path(), ec);
        std::ofstream out(cache);
        if (!out) throw config_error("cannot write cache file '" + cache.string() + "'");
        out << to_json(r).dump(1) << '\n';
    }
    return r;
}

nlohmann::json to_json(const SweepResult& r)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"epsilon", row.epsilon},
                        {"h", row.h},
                        {"mu", row.mu},
                        {"P_ode", number_or_null(row.P_ode)},
                        {"P_nonadiabatic", number_or_null(row.P_nonadiabatic)},
                        {"P_adiabatic", number_or_null(row.P_adiabatic)},
                        {"C_n", number_or_null(row.C_n)},
                        {"alpha", number_or_null(row.alpha)},
                        {"unitarity_defect", number_or_null(row.unitarity_defect)},
                        {"runtime_s", row.runtime_s},
                        {"error", row.error}});
    }
    return {{"provenance", {{"config_hash", r.config_hash}, {"version", r.version}, {"potential", r.potential}}},
            {"rows", rows}};
}

SweepResult sweep_from_json(const nlohmann::json& j)
{
    SweepResult r;
    const auto& prov = j.at("provenance");
    r.config_hash = prov.at("config_hash").get<std::string>();
    r.version = prov.at("version").get<std::string>();
    r.potential = prov.at("potential").get<std::string>();
    for (const auto& x : j.at("rows")) {
        SweepRow row;
        row.epsilon = x.at("epsilon").get<double>();
        row.h = x.at("h").get<double>();
        row.mu = x.at("mu").get<double>();
        row.P_ode = number_from(x.at("P_ode"));
        row.P_nonadiabatic = number_from(x.at("P_nonadiabatic"));
        row.P_adiabatic = number_from(x.at("P_adiabatic"));
        row.C_n = number_from(x.at("C_n"));
        row.alpha = number_from(x.at("alpha"));
        row.unitarity_defect = number_from(x.at("unitarity_defect"));
        row.runtime_s = x.at("runtime_s").get<double>();
        row.error = x.value("error", std::string());
        r.rows.push_back(std::move(row));
    }
    return r;
}

}  // namespace lzlab
