#pragma once

#include "lzlab/sweep.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lzlab {

inline constexpr const char* kCsvHeader =
    "epsilon,h,mu,P_ode,P_nonadiabatic,P_adiabatic,C_n,alpha,unitarity_defect,runtime_s";

// Fixed column order, 17 significant digits, "nan" for undefined cells.
std::string sweep_csv(const SweepResult& r);

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title, x_label, y_label;
    bool log_x = false;
    std::vector<PlotSeries> series;   // one polyline each
    std::vector<double> x_markers;    // vertical marker lines
};

// Standalone SVG document; empty series still produce a valid file with axes and labels.
std::string render_svg(const PlotSpec& spec);

PlotSpec plot_probability_vs_mu(const SweepResult& r);
// C_n sampled on the sweep's h range, with Bohr-Sommerfeld roots as markers.
PlotSpec plot_prefactor_vs_h(const SweepResult& r, const Potential& p);
PlotSpec plot_adiabatic_log_probability(const SweepResult& r);

// Writes sweep.csv, sweep.json and the three SVG plots requested by the config; returns the paths.
std::vector<std::string> emit_reports(const SweepResult& r, const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace lzlab
