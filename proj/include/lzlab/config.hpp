#pragma once

#include "lzlab/potential.hpp"
#include "lzlab/propagator.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace lzlab {

// Experiment description, read from a JSON file:
//
//   {
//     "potential": {"family": "preset", "params": {"name": "two_zero"}, "window": [-10, 10]},
//     "sweep": {"h": [0.01], "mu": {"min": 0.01, "max": 0.08, "count": 4, "log": true}},
//     "regime": "auto",
//     "tolerances": {"ode": 1e-13, "mu0": 0.1, "adiabatic0": 0.1},
//     "output": {"directory": "out", "formats": ["csv", "json", "svg"]},
//     "seed": 0, "budget": 2000, "zero_runtime": false
//   }
//
// The sweep takes "h" plus exactly one of "epsilon" or "mu" (eps = sqrt(mu h)); each axis is a
// list or a {min, max, count, log} range. The grid is the product, h outermost.
struct ExperimentConfig {
    nlohmann::json potential;
    std::vector<double> h_values;
    std::vector<double> second_axis;
    bool axis_is_mu = false;
    std::string regime = "auto";  // auto, nonadiabatic, adiabatic, critical
    double ode_tol = 1e-13;
    RegimeThresholds thresholds;
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    long seed = 0;
    long budget = 2000;
    bool zero_runtime = false;  // write 0 in runtime_s so fresh runs are byte-identical

    struct Point {
        double epsilon, h;
    };
    std::vector<Point> grid() const;

    // Canonical JSON of every field that affects the numbers (output settings excluded).
    nlohmann::json numeric_fields() const;
    std::string hash() const;
    bool wants(const std::string& format) const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Families: preset {name}, tanh_scaled {a}, tanh_product {offsets}, rational {numerator, denominator},
// rational_pair {zeros}. Optional params.scale multiplies V; optional window replaces the zero search range.
Potential build_potential(const nlohmann::json& table);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace lzlab
