// Copyright 2026 The dipne-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "dipne/experiments.hpp"
#include "json.hpp"

namespace dipne::exp {

namespace {

std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::get<std::string>(c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no inf or nan; keep the CSV spelling.
        if (!std::isfinite(*d)) return format_double(*d);
        return *d;
    }
    return std::get<std::string>(c);
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
    rows.push_back(std::move(row));
}

std::size_t ResultTable::column(std::string_view name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::number_at(std::size_t row, std::string_view col) const {
    const auto& c = rows.at(row).at(column(col));
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::numeric_limits<double>::quiet_NaN();
}

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    out << "# dipne-sim " << DIPNE_VERSION << "\n";
    out << "# experiment: " << experiment << "\n";
    for (const auto& [k, v] : config) out << "# config." << k << ": " << v << "\n";
    out << "# cutoffs:";
    for (std::size_t i = 0; i < cutoffs.size(); ++i) out << (i ? "," : " ") << cutoffs[i];
    out << "\n";
    out << "# max_leakage: " << format_double(max_leakage) << "\n";
    for (const auto& [k, v] : summary) out << "# summary." << k << ": " << format_double(v) << "\n";
    for (const auto& n : notes) out << "# note: " << n << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(format_cell(row[i]));
        out << "\n";
    }
    return out.str();
}

std::string ResultTable::to_json() const {
    nlohmann::json j;
    j["version"] = DIPNE_VERSION;
    j["experiment"] = experiment;
    j["config"] = config;
    j["cutoffs"] = cutoffs;
    j["max_leakage"] = max_leakage;
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [k, v] : summary) s[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v));
    j["summary"] = s;
    j["notes"] = notes;
    j["columns"] = columns;
    auto rs = nlohmann::json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rs.push_back(std::move(r));
    }
    j["rows"] = std::move(rs);
    return j.dump(2) + "\n";
}

std::string ResultTable::to_svg(std::string_view x, const std::vector<std::string>& ys, std::string_view group) const {
    constexpr double W = 720, H = 440, L = 70, R = 170, T = 30, B = 50;
    column(x);
    std::vector<std::size_t> yc;
    for (const auto& y : ys) yc.push_back(column(y));
    const std::size_t gc = group.empty() ? columns.size() : column(group);

    // (y column, group label) -> points, in row order.
    std::map<std::pair<std::size_t, std::string>, std::vector<std::pair<double, double>>> series;
    std::vector<std::pair<std::size_t, std::string>> order;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double xv = number_at(r, x);
        if (!std::isfinite(xv)) continue;
        std::string g = gc < columns.size() ? format_cell(rows[r][gc]) : "";
        for (std::size_t yi = 0; yi < yc.size(); ++yi) {
            double yv = number_at(r, ys[yi]);
            if (!std::isfinite(yv)) continue;
            auto key = std::make_pair(yi, g);
            if (!series.count(key)) order.push_back(key);
            series[key].emplace_back(xv, yv);
            x0 = std::min(x0, xv), x1 = std::max(x1, xv);
            y0 = std::min(y0, yv), y1 = std::max(y1, yv);
        }
    }
    if (!(x0 < x1)) x0 -= 0.5, x1 += 0.5;
    if (!(y0 < y1)) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
        << "\" height=\"" << H - T - B << "\"/></g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        out << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">"
            << format_double(std::round(xv * 1e4) / 1e4) << "</text>\n";
        out << "<text x=\"" << L - 5 << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
            << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
    out << "<text x=\"" << fixed(L + (W - L - R) / 2) << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
    out << "<text x=\"" << L << "\" y=\"" << T - 10 << "\">" << experiment << "</text>\n";
    out << "</g>\n";
    for (std::size_t s = 0; s < order.size(); ++s) {
        const auto& key = order[s];
        const char* color = palette[s % 10];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (auto [xv, yv] : series[key]) {
            out << (first ? "" : " ") << fixed(px(xv)) << "," << fixed(py(yv));
            first = false;
        }
        out << "\"/>\n";
        std::string label = ys[key.first];
        if (!key.second.empty()) label += " " + std::string(group) + "=" + key.second;
        double ly = T + 14.0 * static_cast<double>(s) + 10;
        out << "<text x=\"" << W - R + 10 << "\" y=\"" << fixed(ly) << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\""
            << color << "\">" << label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

PlotSpec default_plot(Experiment e) {
    switch (e) {
        case Experiment::Interference: return {"fraction", {"L_intf_sim", "L_intf_theory"}, "family"};
        case Experiment::Kitten: return {"squeeze_photons", {"infidelity_sqcat"}, "k"};
        case Experiment::Catfit: return {"theta_sub", {"mean_n", "peak_estimate"}, "k"};
        case Experiment::Numberdiff: return {"n0", {"probability"}, "k"};
        case Experiment::Match: return {"k_target", {"excess_fraction"}, "k_source"};
        case Experiment::Gaussdrive: return {"r", {"fraction_exact", "fraction_strong_limit"}, "r0"};
        case Experiment::OracleCheck: return {"circuit_id", {"max_meanphoton_error", "max_quadrature_error"}, ""};
    }
    return {};
}

}  // namespace dipne::exp
