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

// esdlab command-line tool.
//
//   esdlab evolve   [--config FILE] [--<key> VALUE ...]   concurrence trace
//   esdlab scan     [--config FILE] [--<key> VALUE ...]   t_esd grid
//   esdlab validate                                        oracle checks
//   esdlab families                                        initial-state families
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "esdlab/config.hpp"
#include "esdlab/io.hpp"
#include "esdlab/scan.hpp"
#include "esdlab/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigOptions {
    std::string path;
    std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
    cmd->add_option("--config", opts.path, "flat JSON run configuration");
    for (const auto& k : esdlab::kConfigKeys) {
        const std::string name(k.key.name);
        cmd->add_option_function<std::string>(
            "--" + name, [&opts, name](const std::string& v) { opts.overrides[name] = v; }, std::string(k.key.help));
    }
}

esdlab::RunConfig load_config(const ConfigOptions& opts) {
    esdlab::RunConfig cfg;
    if (!opts.path.empty()) {
        std::ifstream in(opts.path, std::ios::binary);
        if (!in) throw esdlab::Error(esdlab::ErrorCode::ConfigError, opts.path + ": cannot open");
        std::ostringstream text;
        text << in.rdbuf();
        cfg = esdlab::RunConfig::parse(text.str(), opts.path);
    }
    for (const auto& [key, value] : opts.overrides) cfg.set(key, value);
    return cfg;
}

// Writes through `emit` to the configured path, or stdout for "-".
template <class Emit>
void write_output(const std::string& path, Emit emit) {
    if (path == "-") {
        emit(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw esdlab::Error(esdlab::ErrorCode::ConfigError, "output: cannot write " + path);
    emit(out);
}

bool is_config_error(esdlab::ErrorCode code) {
    using esdlab::ErrorCode;
    switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ParameterOutOfRange:
    case ErrorCode::NegativeRate:
    case ErrorCode::NonPositiveLarmor:
    case ErrorCode::SecularPreconditionViolated:
    case ErrorCode::InvalidStep:
        return true;
    default:
        return false;
    }
}

int cmd_evolve(const ConfigOptions& opts) {
    const esdlab::RunConfig cfg = load_config(opts);
    const esdlab::RunSpec spec = cfg.run_spec();
    const esdlab::Simulation sim = esdlab::simulate(spec);
    write_output(cfg.output(), [&](std::ostream& os) {
        if (cfg.format() == esdlab::OutputFormat::json) esdlab::io::write_trace_json(os, spec, sim);
        else esdlab::io::write_trace_csv(os, esdlab::io::trace_rows(sim));
    });
    std::cerr << "t_esd=" << esdlab::io::format_double(sim.report.t_esd) << " revivals=" << sim.report.revival_count
              << " status=" << esdlab::io::esd_status_name(sim.report.status) << " dt=" << sim.dt << '\n';
    return kExitOk;
}

int cmd_scan(const ConfigOptions& opts) {
    const esdlab::RunConfig cfg = load_config(opts);
    const esdlab::ScanConfig scan = cfg.scan_config();
    const esdlab::ScanResult result = esdlab::run_scan(scan);
    write_output(cfg.output(), [&](std::ostream& os) {
        if (cfg.format() == esdlab::OutputFormat::json) esdlab::io::write_scan_json(os, result);
        else esdlab::io::write_scan_csv(os, result);
    });
    int failures = 0;
    for (const auto& c : result.cells) {
        if (c.status != esdlab::CellStatus::numeric_failure) continue;
        if (failures++ < 5)
            std::cerr << "cell param=" << c.param << " omega_c=" << c.omega_c << ": " << c.message << '\n';
    }
    if (failures) {
        std::cerr << failures << " cell(s) failed\n";
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_validate() {
    bool all = true;
    for (const auto& r : esdlab::run_validation()) {
        std::printf("%-34s %s  value=%.3e  tolerance=%.1e%s%s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.deviation, r.tolerance, r.detail.empty() ? "" : "  ", r.detail.c_str());
        all = all && r.passed;
    }
    return all ? kExitOk : kExitValidation;
}

int cmd_families() {
    using esdlab::FamilyKind;
    for (FamilyKind k : {FamilyKind::werner, FamilyKind::ye, FamilyKind::egge, FamilyKind::eegg}) {
        const auto r = esdlab::parameter_range(k);
        std::printf("%-7s %-6s [%g, %g]\n", std::string(esdlab::family_name(k)).c_str(),
                    std::string(esdlab::parameter_name(k)).c_str(), r.min, r.max);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement sudden death of driven, coupled, dissipative qubits"};
    app.require_subcommand(1);

    ConfigOptions evolve_opts, scan_opts;
    auto* evolve = app.add_subcommand("evolve", "evolve one initial state and write its trace");
    add_config_options(evolve, evolve_opts);
    auto* scan = app.add_subcommand("scan", "t_esd and revival counts over (parameter, omega_c)");
    add_config_options(scan, scan_opts);
    auto* validate = app.add_subcommand("validate", "run the oracle cross-checks");
    auto* families = app.add_subcommand("families", "list initial-state families and parameter ranges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*evolve) return cmd_evolve(evolve_opts);
        if (*scan) return cmd_scan(scan_opts);
        if (*validate) return cmd_validate();
        if (*families) return cmd_families();
    } catch (const esdlab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_config_error(e.code()) ? kExitConfig : kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
