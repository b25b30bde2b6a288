#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "scenario.hpp"

namespace nhqc {

namespace detail {

inline void fmt(std::string& out, const char* spec, double v) {
    char buf[64];
    // -0.000000000000 and 0.000000000000 should not differ between runs.
    if (v == 0.0) v = 0.0;
    std::snprintf(buf, sizeof buf, spec, v);
    out += buf;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace detail

inline std::string csv_string(const RunReport& r) {
    const StateTrajectory& tr = r.trajectory;
    std::string out = "t";
    for (const auto& n : r.level_names) out += "," + n;
    out += ",total,f_real,f_imag,norm\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        detail::fmt(out, "%.12f", tr.grid.at(i));
        for (const auto& p : tr.populations) {
            out += ',';
            detail::fmt(out, "%.12f", p[i]);
        }
        out += ',';
        detail::fmt(out, "%.12f", tr.total_norm[i]);
        out += ',';
        detail::fmt(out, "%.12f", r.phase.f_real[i]);
        out += ',';
        detail::fmt(out, "%.12f", r.phase.f_imag[i]);
        out += ',';
        detail::fmt(out, "%.12f", tr.norm(i));
        out += '\n';
    }
    return out;
}

inline void export_csv(const RunReport& r, const std::string& path) { detail::write_file(path, csv_string(r)); }

// Line chart of every population plus the total norm against t/T.
inline std::string svg_string(const RunReport& r, std::size_t max_points = 1000) {
    const StateTrajectory& tr = r.trajectory;
    const double W = 800, H = 480, left = 70, right = 130, top = 30, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    const double T = r.config.T;
    const double x_max = tr.grid.tf() / T;
    double y_max = 1.0;
    for (double v : tr.total_norm) y_max = std::max(y_max, v);
    for (const auto& p : tr.populations)
        for (double v : p) y_max = std::max(y_max, v);
    y_max = std::ceil(y_max * 10.0) / 10.0;

    auto X = [&](double t) { return left + pw * (t / T) / x_max; };
    auto Y = [&](double v) { return top + ph * (1.0 - v / y_max); };
    const std::size_t stride = std::max<std::size_t>(1, tr.size() / max_points);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n";
    out += "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";

    auto line = [&](double x1, double y1, double x2, double y2, const char* style) {
        out += "<line x1=\"";
        detail::fmt(out, "%.3f", x1);
        out += "\" y1=\"";
        detail::fmt(out, "%.3f", y1);
        out += "\" x2=\"";
        detail::fmt(out, "%.3f", x2);
        out += "\" y2=\"";
        detail::fmt(out, "%.3f", y2);
        out += "\" ";
        out += style;
        out += "/>\n";
    };
    auto text = [&](double x, double y, const std::string& s, const char* anchor) {
        out += "<text x=\"";
        detail::fmt(out, "%.3f", x);
        out += "\" y=\"";
        detail::fmt(out, "%.3f", y);
        out += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"";
        out += anchor;
        out += "\">" + s + "</text>\n";
    };

    line(left, top + ph, left + pw, top + ph, "stroke=\"black\"");
    line(left, top, left, top + ph, "stroke=\"black\"");
    const int xticks = static_cast<int>(std::round(x_max));
    const int xstep = std::max(1, xticks / 12);
    for (int k = 0; k <= xticks; k += xstep) {
        const double x = X(k * T);
        line(x, top + ph, x, top + ph + 5, "stroke=\"black\"");
        text(x, top + ph + 20, std::to_string(k), "middle");
    }
    for (int k = 0; k <= static_cast<int>(std::round(y_max * 5)); ++k) {
        const double v = k * 0.2;
        char lbl[16];
        std::snprintf(lbl, sizeof lbl, "%.1f", v);
        line(left - 5, Y(v), left, Y(v), "stroke=\"black\"");
        text(left - 8, Y(v) + 4, lbl, "end");
    }
    text(left + pw / 2, H - 15, "t/T", "middle");
    out += "<text x=\"18\" y=\"";
    detail::fmt(out, "%.3f", top + ph / 2);
    out += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 ";
    detail::fmt(out, "%.3f", top + ph / 2);
    out += ")\">population</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
    auto polyline = [&](const std::vector<double>& v, const char* color, bool dashed) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\"";
        if (dashed) out += " stroke-dasharray=\"6 4\"";
        out += " points=\"";
        for (std::size_t i = 0; i < tr.size(); i += stride) {
            if (i) out += ' ';
            detail::fmt(out, "%.3f", X(tr.grid.at(i)));
            out += ',';
            detail::fmt(out, "%.3f", Y(v[i]));
        }
        if ((tr.size() - 1) % stride != 0) {
            out += ' ';
            detail::fmt(out, "%.3f", X(tr.grid.at(tr.size() - 1)));
            out += ',';
            detail::fmt(out, "%.3f", Y(v.back()));
        }
        out += "\"/>\n";
    };
    std::vector<std::pair<std::string, const char*>> legend;
    for (std::size_t n = 0; n < tr.populations.size(); ++n) {
        polyline(tr.populations[n], colors[n % 3], false);
        legend.emplace_back(r.level_names.at(n), colors[n % 3]);
    }
    polyline(tr.total_norm, "black", true);
    legend.emplace_back("total", "black");

    for (std::size_t k = 0; k < legend.size(); ++k) {
        const double y = top + 15 + 20.0 * k;
        const bool dashed = legend[k].first == "total";
        out += "<line x1=\"";
        detail::fmt(out, "%.3f", left + pw + 15);
        out += "\" y1=\"";
        detail::fmt(out, "%.3f", y);
        out += "\" x2=\"";
        detail::fmt(out, "%.3f", left + pw + 45);
        out += "\" y2=\"";
        detail::fmt(out, "%.3f", y);
        out += "\" stroke=\"";
        out += legend[k].second;
        out += "\" stroke-width=\"1.5\"";
        if (dashed) out += " stroke-dasharray=\"6 4\"";
        out += "/>\n";
        text(left + pw + 50, y + 4, legend[k].first, "start");
    }
    out += "</svg>\n";
    return out;
}

inline void export_svg(const RunReport& r, const std::string& path) { detail::write_file(path, svg_string(r)); }

}  // namespace nhqc
