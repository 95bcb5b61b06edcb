// Copyright 2026 The esdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file io.hpp
 * @brief CSV and JSON export of concurrence traces and scan grids, plus the
 *        readers used for round-trip checks.
 *
 * Numbers are written in the shortest decimal form that parses back to the
 * same double. Non-finite values use the tokens "inf", "-inf" and "nan".
 * CSV files always carry a header row and use LF line endings.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "esdlab/error.hpp"
#include "esdlab/scan.hpp"

namespace esdlab::io {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::ConfigError, "not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

inline constexpr std::string_view kTraceHeader = "t,a,b,c,d,re_w,im_w,re_z,im_z,F,G,concurrence";

struct TraceRow {
    double t = 0.0;
    XState x;
    double f = 0.0;
    double g = 0.0;
    double concurrence = 0.0;
};

/// Rows of a simulation kept with `keep_states = true`.
inline std::vector<TraceRow> trace_rows(const Simulation& sim) {
    if (sim.x.size() != sim.trace.samples.size())
        throw Error(ErrorCode::ConfigError, "simulation was run without keeping states");
    std::vector<TraceRow> rows(sim.x.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& s = sim.trace.samples[i];
        rows[i] = {s.t, sim.x[i], s.f, s.g, s.concurrence};
    }
    return rows;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << kTraceHeader << '\n';
    for (const auto& r : rows) {
        const double values[] = {r.t,           r.x.a,         r.x.b,         r.x.c, r.x.d, r.x.w.real(),
                                 r.x.w.imag(),  r.x.z.real(),  r.x.z.imag(),  r.f,   r.g,   r.concurrence};
        for (std::size_t k = 0; k < std::size(values); ++k) {
            if (k) os << ',';
            os << format_double(values[k]);
        }
        os << '\n';
    }
}

inline std::vector<TraceRow> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader)
        throw Error(ErrorCode::ConfigError, "trace CSV: missing or unexpected header");
    std::vector<TraceRow> rows;
    for (int lineno = 2; std::getline(is, line); ++lineno) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 12)
            throw Error(ErrorCode::ConfigError, "trace CSV line " + std::to_string(lineno) + ": expected 12 fields");
        TraceRow r;
        r.t = parse_double(f[0]);
        r.x.a = parse_double(f[1]);
        r.x.b = parse_double(f[2]);
        r.x.c = parse_double(f[3]);
        r.x.d = parse_double(f[4]);
        r.x.w = {parse_double(f[5]), parse_double(f[6])};
        r.x.z = {parse_double(f[7]), parse_double(f[8])};
        r.f = parse_double(f[9]);
        r.g = parse_double(f[10]);
        r.concurrence = parse_double(f[11]);
        rows.push_back(r);
    }
    return rows;
}

// JSON has no infinity; non-finite numbers are emitted as their string tokens.
inline nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

inline std::string_view esd_status_name(EsdStatus s) {
    switch (s) {
    case EsdStatus::ok: return "OK";
    case EsdStatus::never_entangled: return "NEVER_ENTANGLED";
    case EsdStatus::positive_at_horizon: return "POSITIVE_AT_HORIZON";
    }
    return "";
}

inline void write_trace_json(std::ostream& os, const RunSpec& spec, const Simulation& sim) {
    nlohmann::json doc;
    doc["model"] = std::string(model_name(spec.model));
    doc["family"] = std::string(family_name(kind_of(spec.family)));
    doc["param"] = parameter_of(spec.family);
    doc["dt"] = sim.dt;
    doc["epsilon"] = sim.trace.epsilon;
    doc["t_esd"] = json_number(sim.report.t_esd);
    doc["revivals"] = sim.report.revival_count;
    doc["status"] = std::string(esd_status_name(sim.report.status));
    nlohmann::json columns = nlohmann::json::array();
    for (std::string_view name : split_csv_line(kTraceHeader)) columns.push_back(std::string(name));
    doc["columns"] = columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : trace_rows(sim)) {
        rows.push_back({json_number(r.t), json_number(r.x.a), json_number(r.x.b), json_number(r.x.c),
                        json_number(r.x.d), json_number(r.x.w.real()), json_number(r.x.w.imag()),
                        json_number(r.x.z.real()), json_number(r.x.z.imag()), json_number(r.f),
                        json_number(r.g), json_number(r.concurrence)});
    }
    doc["rows"] = rows;
    os << doc.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Scan grids
// ---------------------------------------------------------------------------

inline constexpr std::string_view kScanHeader = "param,omega_c,t_esd,revivals,status";

inline void write_scan_csv(std::ostream& os, const ScanResult& result) {
    os << kScanHeader << '\n';
    for (const auto& c : result.cells) {
        os << format_double(c.param) << ',' << format_double(c.omega_c) << ',' << format_double(c.t_esd) << ','
           << c.revivals << ',' << status_name(c.status) << '\n';
    }
}

inline std::vector<ScanCell> read_scan_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kScanHeader)
        throw Error(ErrorCode::ConfigError, "scan CSV: missing or unexpected header");
    std::vector<ScanCell> cells;
    for (int lineno = 2; std::getline(is, line); ++lineno) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        const std::string where = "scan CSV line " + std::to_string(lineno);
        if (f.size() != 5) throw Error(ErrorCode::ConfigError, where + ": expected 5 fields");
        ScanCell c;
        c.param = parse_double(f[0]);
        c.omega_c = parse_double(f[1]);
        c.t_esd = parse_double(f[2]);
        int revivals = 0;
        const auto res = std::from_chars(f[3].data(), f[3].data() + f[3].size(), revivals);
        if (res.ec != std::errc{} || res.ptr != f[3].data() + f[3].size())
            throw Error(ErrorCode::ConfigError, where + ": bad revivals field");
        c.revivals = revivals;
        if (!parse_status(f[4], c.status)) throw Error(ErrorCode::ConfigError, where + ": unknown status");
        cells.push_back(c);
    }
    return cells;
}

inline void write_scan_json(std::ostream& os, const ScanResult& result) {
    const ScanConfig& cfg = result.config;
    nlohmann::json doc;
    doc["family"] = std::string(family_name(cfg.family));
    doc["model"] = std::string(model_name(cfg.model));
    doc["param_min"] = cfg.param.min;
    doc["param_max"] = cfg.param.max;
    doc["param_steps"] = cfg.param.steps;
    doc["omega_c_min"] = cfg.omega_c.min;
    doc["omega_c_max"] = cfg.omega_c.max;
    doc["omega_c_steps"] = cfg.omega_c.steps;
    doc["t_max"] = cfg.t_max;
    doc["epsilon"] = cfg.epsilon;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"param", c.param},
                         {"omega_c", c.omega_c},
                         {"t_esd", json_number(c.t_esd)},
                         {"revivals", c.revivals},
                         {"status", std::string(status_name(c.status))}});
    }
    doc["cells"] = cells;
    os << doc.dump(1) << '\n';
}

} // namespace esdlab::io
