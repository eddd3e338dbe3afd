#include "lzlab/report.hpp"

#include "lzlab/asymptotics.hpp"
#include "lzlab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace lzlab {

namespace {

std::string cell(double x)
{
    if (std::isnan(x)) return "nan";
    return fmt::format("{:.17g}", x);
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write '" + path.string() + "'");
    out << text;
}

std::vector<std::pair<double, double>> sorted_finite(std::vector<std::pair<double, double>> pts)
{
    std::erase_if(pts, [](const auto& q) { return !std::isfinite(q.first) || !std::isfinite(q.second); });
    std::sort(pts.begin(), pts.end());
    return pts;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

std::string sweep_csv(const SweepResult& r)
{
    std::string s = std::string(kCsvHeader) + "\n";
    for (const auto& row : r.rows) {
        s += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", cell(row.epsilon), cell(row.h), cell(row.mu), cell(row.P_ode),
                         cell(row.P_nonadiabatic), cell(row.P_adiabatic), cell(row.C_n), cell(row.alpha),
                         cell(row.unitarity_defect), cell(row.runtime_s));
    }
    return s;
}

std::string render_svg(const PlotSpec& spec)
{
    constexpr double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 55;
    auto xmap = [&](double x) { return spec.log_x ? std::log10(x) : x; };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : spec.series)
        for (auto [x, y] : s.points) {
            if (spec.log_x && !(x > 0.0)) continue;
            x0 = std::min(x0, xmap(x));
            x1 = std::max(x1, xmap(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return left + (xmap(x) - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

    std::string s = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{3}</text>\n",
        W, H, W / 2, xml_escape(spec.title));
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, H - bottom, W - right);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top, H - bottom);
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n", (left + W - right) / 2,
                     H - 12, xml_escape(spec.x_label + (spec.log_x ? " (log10)" : "")));
    s += fmt::format("<text x=\"16\" y=\"{0}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     (top + H - bottom) / 2, xml_escape(spec.y_label));
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        const double sx = left + (W - left - right) * i / 4.0, sy = H - bottom - (H - top - bottom) * i / 4.0;
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{:.4g}</text>\n", sx,
                         H - bottom + 14, fx);
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n", left - 4, sy + 3, fy);
    }
    for (double m : spec.x_markers) {
        if (spec.log_x && !(m > 0.0)) continue;
        if (xmap(m) < x0 || xmap(m) > x1) continue;
        s += fmt::format("<line x1=\"{0:.3f}\" y1=\"{1}\" x2=\"{0:.3f}\" y2=\"{2}\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n",
                         px(m), top, H - bottom);
    }
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& ser = spec.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string pts;
        for (auto [x, y] : ser.points) {
            if (spec.log_x && !(x > 0.0)) continue;
            if (!pts.empty()) pts += ' ';
            pts += fmt::format("{:.3f},{:.3f}", px(x), py(y));
        }
        s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"><title>{}</title></polyline>\n",
                         color, pts, xml_escape(ser.name));
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n", W - right - 150,
                         top + 14 * (k + 1), color, xml_escape(ser.name));
    }
    s += "</svg>\n";
    return s;
}

PlotSpec plot_probability_vs_mu(const SweepResult& r)
{
    PlotSpec p{"Transition probability vs mu", "mu", "P", true, {}, {}};
    PlotSeries ode{"P_ode", {}}, na{"P_nonadiabatic", {}};
    for (const auto& row : r.rows) {
        ode.points.emplace_back(row.mu, row.P_ode);
        na.points.emplace_back(row.mu, row.P_nonadiabatic);
    }
    ode.points = sorted_finite(ode.points);
    na.points = sorted_finite(na.points);
    p.series = {ode, na};
    return p;
}

PlotSpec plot_prefactor_vs_h(const SweepResult& r, const Potential& pot)
{
    PlotSpec p{"Prefactor C_n vs h", "h", "C_n", false, {}, {}};
    PlotSeries curve{"C_n(h)", {}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : r.rows) lo = std::min(lo, row.h), hi = std::max(hi, row.h);
    if (pot.crossing_count() > 0 && std::isfinite(lo)) {
        if (hi == lo) lo *= 0.9, hi *= 1.1;
        constexpr int samples = 800;
        for (int i = 0; i <= samples; ++i) {
            const double h = lo + (hi - lo) * i / samples;
            curve.points.emplace_back(h, prefactor_Cn(pot, h));
        }
        if (pot.crossing_count() >= 2) {
            try {
                p.x_markers = bohr_sommerfeld_roots(pot, lo, hi).roots;
            } catch (const LabError&) {
                // no markers when the root search cannot run on this range
            }
        }
    }
    p.series = {curve};
    return p;
}

PlotSpec plot_adiabatic_log_probability(const SweepResult& r)
{
    PlotSpec p{"Adiabatic regime: log P vs 1/h", "1/h", "log P", false, {}, {}};
    PlotSeries ode{"log P_ode", {}}, ad{"log P_adiabatic", {}};
    for (const auto& row : r.rows) {
        if (row.P_ode > 0.0) ode.points.emplace_back(1.0 / row.h, std::log(row.P_ode));
        if (row.P_adiabatic > 0.0) ad.points.emplace_back(1.0 / row.h, std::log(row.P_adiabatic));
    }
    ode.points = sorted_finite(ode.points);
    ad.points = sorted_finite(ad.points);
    p.series = {ode, ad};
    return p;
}

std::vector<std::string> emit_reports(const SweepResult& r, const ExperimentConfig& cfg, const std::string& out_dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw config_error("cannot create output directory '" + out_dir + "': " + ec.message());
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& text) {
        const fs::path path = fs::path(out_dir) / name;
        write_file(path, text);
        written.push_back(path.string());
    };
    if (cfg.wants("csv")) put("sweep.csv", sweep_csv(r));
    if (cfg.wants("json")) put("sweep.json", to_json(r).dump(1) + "\n");
    if (cfg.wants("svg")) {
        const Potential pot = build_potential(cfg.potential);
        put("p_vs_mu.svg", render_svg(plot_probability_vs_mu(r)));
        put("cn_vs_h.svg", render_svg(plot_prefactor_vs_h(r, pot)));
        put("adiabatic_logp_vs_inv_h.svg", render_svg(plot_adiabatic_log_probability(r)));
    }
    return written;
}

}  // namespace lzlab
