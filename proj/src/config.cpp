#include "lzlab/config.hpp"

#include "lzlab/error.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lzlab {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
    return j.at(key);
}

double as_number(const json& j, const std::string& where)
{
    if (!j.is_number()) throw config_error(where + ": expected a number");
    return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& where)
{
    if (!j.is_array()) throw config_error(where + ": expected a list of numbers");
    std::vector<double> v;
    for (const auto& x : j) v.push_back(as_number(x, where));
    return v;
}

std::vector<double> axis_values(const json& j, const std::string& name)
{
    if (j.is_array()) return number_list(j, "sweep." + name);
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_object()) throw config_error("sweep." + name + ": expected a list or a {min, max, count, log} range");
    const double lo = as_number(require(j, "min", "sweep." + name), "sweep." + name + ".min");
    const double hi = as_number(require(j, "max", "sweep." + name), "sweep." + name + ".max");
    const json& c = require(j, "count", "sweep." + name);
    if (!c.is_number_integer() || c.get<long>() < 1) throw config_error("sweep." + name + ".count: expected a positive integer");
    const long count = c.get<long>();
    const bool log = j.value("log", false);
    if (log && !(lo > 0.0 && hi > 0.0)) throw config_error("sweep." + name + ": log range needs positive bounds");
    std::vector<double> v;
    for (long i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        v.push_back(log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
    }
    return v;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<ExperimentConfig::Point> ExperimentConfig::grid() const
{
    std::vector<Point> g;
    for (double h : h_values)
        for (double x : second_axis) g.push_back({axis_is_mu ? std::sqrt(x * h) : x, h});
    return g;
}

nlohmann::json ExperimentConfig::numeric_fields() const
{
    return {{"potential", potential},
            {"h", h_values},
            {axis_is_mu ? "mu" : "epsilon", second_axis},
            {"regime", regime},
            {"ode_tol", ode_tol},
            {"mu0", thresholds.mu0},
            {"adiabatic0", thresholds.adiabatic0},
            {"seed", seed},
            {"zero_runtime", zero_runtime}};
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(numeric_fields().dump()); }

bool ExperimentConfig::wants(const std::string& format) const
{
    for (const auto& f : formats)
        if (f == format) return true;
    return false;
}

ExperimentConfig parse_config(const nlohmann::json& j)
{
    if (!j.is_object()) throw config_error("config: top level must be an object");
    static const std::set<std::string> known{"potential", "sweep",  "regime", "tolerances",  "output",
                                             "seed",      "budget", "zero_runtime"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw config_error("config: unknown key '" + key + "'");

    ExperimentConfig c;
    c.potential = require(j, "potential", "config");
    build_potential(c.potential);  // validates the table early

    const json& sweep = require(j, "sweep", "config");
    c.h_values = axis_values(require(sweep, "h", "sweep"), "h");
    const bool has_eps = sweep.contains("epsilon"), has_mu = sweep.contains("mu");
    if (has_eps == has_mu) throw config_error("sweep: give exactly one of 'epsilon' or 'mu'");
    c.axis_is_mu = has_mu;
    c.second_axis = axis_values(sweep.at(has_mu ? "mu" : "epsilon"), has_mu ? "mu" : "epsilon");
    for (double h : c.h_values)
        if (!(h > 0.0) || !std::isfinite(h)) throw config_error("sweep.h: every h must be positive");
    for (double x : c.second_axis)
        if (!(x >= 0.0) || !std::isfinite(x)) throw config_error("sweep: epsilon and mu must be non-negative");

    c.regime = j.value("regime", std::string("auto"));
    if (c.regime != "auto" && c.regime != "nonadiabatic" && c.regime != "adiabatic" && c.regime != "critical")
        throw config_error("regime: expected auto, nonadiabatic, adiabatic or critical");

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        c.ode_tol = t.value("ode", c.ode_tol);
        c.thresholds.mu0 = t.value("mu0", c.thresholds.mu0);
        c.thresholds.adiabatic0 = t.value("adiabatic0", c.thresholds.adiabatic0);
        if (!(c.ode_tol >= 1e-13 && c.ode_tol < 1e-3)) throw config_error("tolerances.ode must lie in [1e-13, 1e-3)");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        c.out_dir = o.value("directory", c.out_dir);
        if (o.contains("formats")) {
            c.formats.clear();
            for (const auto& f : o.at("formats")) {
                const auto s = f.get<std::string>();
                if (s != "csv" && s != "json" && s != "svg") throw config_error("output.formats: unknown format '" + s + "'");
                c.formats.push_back(s);
            }
        }
    }
    c.seed = j.value("seed", 0L);
    c.budget = j.value("budget", 2000L);
    c.zero_runtime = j.value("zero_runtime", false);

    const std::size_t points = c.h_values.size() * c.second_axis.size();
    if (points > static_cast<std::size_t>(std::max(0L, c.budget))) {
        std::ostringstream os;
        os << "sweep has " << points << " points, above the budget of " << c.budget;
        throw budget_error(os.str());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

Potential build_potential(const nlohmann::json& table)
{
    const std::string family = require(table, "family", "potential").get<std::string>();
    const json params = table.value("params", json::object());
    Potential p = [&] {
        if (family == "preset") return Potential::preset(require(params, "name", "potential.params").get<std::string>());
        if (family == "tanh_scaled") return Potential::tanh_scaled(params.value("a", 1.0));
        if (family == "tanh_product")
            return Potential::tanh_product(number_list(require(params, "offsets", "potential.params"), "offsets"));
        if (family == "rational")
            return Potential::rational(number_list(require(params, "numerator", "potential.params"), "numerator"),
                                       number_list(require(params, "denominator", "potential.params"), "denominator"));
        if (family == "rational_pair")
            return Potential::rational_pair(number_list(require(params, "zeros", "potential.params"), "zeros"));
        throw config_error("potential.family: unknown family '" + family + "'");
    }();
    if (params.contains("scale")) p = p.scaled(as_number(params.at("scale"), "potential.params.scale"));
    if (table.contains("window")) {
        const auto w = number_list(table.at("window"), "potential.window");
        if (w.size() != 2 || !(w[0] < w[1])) throw config_error("potential.window: expected [t_min, t_max]");
        p = p.with_window(w[0], w[1]);
    }
    return p;
}

}  // namespace lzlab
