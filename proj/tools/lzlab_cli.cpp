// Command-line driver: single evaluations, sweeps and diagnostics, all printing JSON.

#include "lzlab/asymptotics.hpp"
#include "lzlab/config.hpp"
#include "lzlab/error.hpp"
#include "lzlab/exact_wkb.hpp"
#include "lzlab/report.hpp"
#include "lzlab/sweep.hpp"
#include "lzlab/transfer.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

using namespace lzlab;
using nlohmann::json;

namespace {

struct Globals {
    std::string config;
    std::string out;
    bool force = false;
    int threads = 0;
    std::string log_level = "warn";
    std::string potential = "one_zero";
};

std::optional<ExperimentConfig> maybe_config(const Globals& g)
{
    if (g.config.empty()) return std::nullopt;
    return load_config(g.config);
}

// --potential takes a preset name or a config file; otherwise the --config potential is used.
Potential chosen_potential(const Globals& g, bool potential_given)
{
    if (potential_given) {
        for (const auto& name : Potential::preset_names())
            if (name == g.potential) return Potential::preset(name);
        return build_potential(load_config(g.potential).potential);
    }
    if (auto cfg = maybe_config(g)) return build_potential(cfg->potential);
    return Potential::preset(g.potential);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Mat2& m)
{
    json rows = json::array();
    for (int i = 0; i < 2; ++i) rows.push_back({complex_json(m(i, 0)), complex_json(m(i, 1))});
    return rows;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<cplx> parse_path(const std::string& text)
{
    // "x:y,x:y,..." with each waypoint x + i y
    std::vector<cplx> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw config_error("--path: waypoints must look like x:y");
        try {
            pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw config_error("--path: cannot parse waypoint '" + item + "'");
        }
    }
    return pts;
}

int run(int argc, char** argv)
{
    CLI::App app{"Two-level avoided-crossing scattering lab"};
    app.require_subcommand(1);
    // --h is the semiclassical parameter, so help keeps only its long form.
    app.set_help_flag("--help", "print this help and exit");
    Globals g;
    app.add_option("--config", g.config, "JSON experiment config (supplies the potential and sweep)");
    app.add_option("--out", g.out, "output directory (overrides the config)");
    app.add_flag("--force", g.force, "ignore cached sweep results");
    app.add_option("--threads", g.threads, "worker threads for sweeps (0: OpenMP default)");
    app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off");
    auto* potential_opt = app.add_option("--potential,--preset", g.potential,
                                         "preset name or config file (default: the --config potential, else one_zero)");

    double eps = 0.1, h = 0.05, tol = 1e-13, T = 0.0;
    std::vector<double> eps_list;
    std::vector<double> h_list{0.04, 0.02, 0.01, 0.005};
    std::string regime = "auto";
    double h_min = 0.005, h_max = 0.05;
    std::string path_text = "auto-offset";
    int crossing = 1;
    int k_max = 40;
    double radius = -1.0;

    auto* probability = app.add_subcommand("probability", "transition probability from the direct ODE");
    probability->add_option("--eps,--epsilon", eps)->required();
    probability->add_option("--h", h)->required();
    probability->add_option("--tol", tol);
    probability->add_option("--T", T, "truncation time (0: automatic)");

    auto* sweep = app.add_subcommand("sweep", "run the sweep described by --config");

    auto* actions = app.add_subcommand("actions", "turning points and action integrals");
    actions->add_option("--eps,--epsilon", eps_list)->required();

    auto* asymptote = app.add_subcommand("asymptote", "asymptotic prediction of P");
    asymptote->add_option("--eps,--epsilon", eps)->required();
    asymptote->add_option("--h", h)->required();
    asymptote->add_option("--regime", regime)->check(CLI::IsMember({"auto", "nonadiabatic", "adiabatic"}));

    auto* bs = app.add_subcommand("bs-roots", "zeros of the prefactor C_n(h)");
    bs->add_option("--h-min", h_min);
    bs->add_option("--h-max", h_max);

    auto* chain = app.add_subcommand("chain", "transfer-matrix chain and its product");
    chain->add_option("--eps,--epsilon", eps)->required();
    chain->add_option("--h", h)->required();
    chain->add_option("--regime", regime)->check(CLI::IsMember({"auto", "nonadiabatic", "adiabatic"}));

    auto* wkb = app.add_subcommand("wkb-wronskian", "Wronskian of exact WKB solutions along a polyline");
    wkb->add_option("--eps,--epsilon", eps)->required();
    wkb->add_option("--h,--h-list", h_list);
    wkb->add_option("--crossing", crossing, "crossing index (1-based) for the automatic path");
    wkb->add_option("--path", path_text,
                    "waypoints x:y,... from b_+ to b_-, or 'auto-offset [c]': t_k + c(1+i) down to t_k + c(1-i)");
    wkb->add_option("--kmax", k_max);
    wkb->add_option("--radius", radius, "exclusion radius (negative: default)");

    auto* validate = app.add_subcommand("validate", "check the potential against the standing assumptions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code(ErrorKind::config);
    }
    spdlog::set_level(spdlog::level::from_str(g.log_level));

    auto pick_regime = [&](double e, double hh) {
        if (regime == "nonadiabatic") return Regime::nonadiabatic;
        if (regime == "adiabatic") return Regime::adiabatic;
        const Regime r = RegimeParams{e, hh}.regime();
        if (r == Regime::critical) throw config_error("regime error: mu = " + std::to_string(e * e / hh) + " is critical");
        return r;
    };

    if (*probability) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        ScatteringOptions o;
        o.tol = tol;
        o.T = T;
        const RegimeParams rp{eps, h};
        spdlog::info("propagating {} at eps={} h={}", p.description(), eps, h);
        const auto r = transition_probability(p, rp, o);
        print({{"potential", p.description()},
               {"epsilon", eps},
               {"h", h},
               {"mu", rp.mu()},
               {"regime", regime_name(rp.regime())},
               {"P", r.probability},
               {"s_matrix", matrix_json(r.s_matrix)},
               {"unitarity_defect", r.unitarity_defect},
               {"T", r.truncation_T},
               {"T_drift_P", r.t_drift_P},
               {"steps", r.stats.steps},
               {"rejected", r.stats.rejected},
               {"runtime_s", r.runtime_s}});
    } else if (*sweep) {
        auto cfg = maybe_config(g);
        if (!cfg) throw config_error("sweep needs --config");
        if (!g.out.empty()) cfg->out_dir = g.out;
        SweepOptions o;
        o.threads = g.threads;
        o.force = g.force;
        spdlog::info("sweep of {} points, hash {}", cfg->grid().size(), cfg->hash());
        const auto r = run_sweep(*cfg, o);
        const auto files = emit_reports(r, *cfg, cfg->out_dir);
        long failed = 0;
        for (const auto& row : r.rows) failed += !row.error.empty();
        print({{"points", r.rows.size()},
               {"failed_rows", failed},
               {"config_hash", r.config_hash},
               {"from_cache", r.from_cache},
               {"files", files}});
    } else if (*actions) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        json out = json::array();
        for (double e : eps_list) {
            const auto geo = compute_geometry(p, e);
            const auto ak = alpha_and_K(geo);
            json zs = json::array(), as = json::array();
            for (cplx z : geo.turning_points) zs.push_back(complex_json(z));
            for (cplx a : geo.actions_A) as.push_back(complex_json(a));
            json K = json::array();
            for (int k : ak.K) K.push_back(k + 1);
            out.push_back({{"epsilon", e},
                           {"turning_points", zs},
                           {"A", as},
                           {"R", geo.actions_R},
                           {"R0", geo.actions_R0},
                           {"A_r", geo.action_right},
                           {"A_l", geo.action_left},
                           {"alpha", ak.alpha},
                           {"K", K}});
        }
        print(out);
    } else if (*asymptote) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        const Regime r = pick_regime(eps, h);
        RegimeThresholds th;
        if (regime != "auto") th.mu0 = th.adiabatic0 = INFINITY;
        const auto pred = r == Regime::nonadiabatic ? predict_nonadiabatic(p, eps, h, th)
                                                    : predict_adiabatic(compute_geometry(p, eps), h, th);
        print({{"regime", regime_name(pred.regime)},
               {"P", pred.value},
               {"log_P", pred.log_value},
               {"prefactor", pred.prefactor},
               {"alpha", pred.alpha},
               {"error_orders", pred.error_orders},
               {"mu", pred.mu},
               {"order_degenerate", pred.order_degenerate},
               {"warnings", pred.warnings}});
    } else if (*bs) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        const auto r = bohr_sommerfeld_roots(p, h_min, h_max);
        print({{"roots", r.roots}, {"closed_form", r.closed_form}, {"note", r.note}});
    } else if (*chain) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        const auto c = assemble_chain(p, eps, h, pick_regime(eps, h));
        const auto prod = chain_product(c);
        json entries = json::array();
        for (const auto& e : c.entries) entries.push_back({{"label", e.label}, {"matrix", matrix_json(e.m)}});
        print({{"regime", regime_name(c.regime)},
               {"entries", entries},
               {"S", matrix_json(prod.s)},
               {"P", prod.probability}});
    } else if (*wkb) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        PolylinePath path;
        if (path_text.rfind("auto-offset", 0) == 0) {
            if (crossing < 1 || crossing > p.crossing_count()) throw config_error("--crossing out of range");
            const double tk = p.zeros()[crossing - 1];
            double gap = 2.0;
            for (double z : p.zeros())
                if (z != tk) gap = std::min(gap, std::abs(z - tk));
            double c = 0.5 * std::min(1.0, gap / 2.0);
            const std::string rest = path_text.substr(std::string("auto-offset").size());
            if (rest.find_first_not_of(' ') != std::string::npos) c = std::stod(rest);
            path.waypoints = {cplx(tk + c, c), cplx(tk + c, -c)};
        } else {
            path.waypoints = parse_path(path_text);
        }
        ResumOptions o;
        o.exclusion_radius = radius;
        std::cout << "h,re_W,im_W,abs_W_minus_2i,dist,t_defect\n";
        for (double hh : h_list) {
            const double r = radius < 0.0 ? default_exclusion_radius(p, eps, hh) : radius;
            const auto cert = certify_path(p, eps, path, 1, r);
            if (!cert.ok) throw numerical_error("path certificate failed: " + cert.reason);
            const cplx W = wronskian(p, eps, path, hh, k_max, o);
            const auto prof = wronskian_profile(p, eps, path, hh, path.waypoints.front(), k_max, o);
            std::cout << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", hh, W.real(), W.imag(),
                                     std::abs(W - cplx(0.0, 2.0)), cert.min_distance, prof.defect);
        }
    } else if (*validate) {
        const Potential p = chosen_potential(g, potential_opt->count() > 0);
        const auto rep = validate_assumptions(p);
        json checks = json::array();
        for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        print({{"potential", p.description()},
               {"all_pass", rep.all_pass()},
               {"tail_exponent_right", rep.tail_exponent_right},
               {"tail_exponent_left", rep.tail_exponent_left},
               {"checks", checks}});
        if (!rep.all_pass()) return exit_code(ErrorKind::config);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const LabError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ErrorKind::config);
    }
}
