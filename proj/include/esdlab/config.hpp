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
 * @file config.hpp
 * @brief Run configuration: one flat JSON object per run, with command-line
 *        overrides whose names are the document keys.
 *
 * Every rejected document produces an Error(ConfigError) whose message names
 * the offending key and, for file input, its line.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "esdlab/error.hpp"
#include "esdlab/io.hpp"
#include "esdlab/scan.hpp"

namespace esdlab {

enum class KeyType { number, integer, string };

struct ConfigKey {
    std::string_view name;
    KeyType type;
    std::string_view help;
};

enum class KeyScope { both, evolve, scan };

struct ScopedKey {
    ConfigKey key;
    KeyScope scope;
};

inline constexpr std::array kConfigKeys = {
    ScopedKey{{"model", KeyType::string, "kinetic | closed-form | secular-full | rotating-frame | thermal-undriven"},
              KeyScope::both},
    ScopedKey{{"family", KeyType::string, "werner | ye | egge | eegg"}, KeyScope::both},
    ScopedKey{{"param", KeyType::number, "family parameter (f, alpha, p or s)"}, KeyScope::evolve},
    ScopedKey{{"f", KeyType::number, "Werner fidelity"}, KeyScope::evolve},
    ScopedKey{{"alpha", KeyType::number, "YE parameter"}, KeyScope::evolve},
    ScopedKey{{"p", KeyType::number, "eg-ge weight"}, KeyScope::evolve},
    ScopedKey{{"s", KeyType::number, "ee-gg weight"}, KeyScope::evolve},
    ScopedKey{{"gamma", KeyType::number, "relaxation rate of both qubits"}, KeyScope::both},
    ScopedKey{{"gamma1", KeyType::number, "relaxation rate of qubit 1"}, KeyScope::evolve},
    ScopedKey{{"gamma2", KeyType::number, "relaxation rate of qubit 2"}, KeyScope::evolve},
    ScopedKey{{"rabi", KeyType::number, "Rabi frequency of both drives"}, KeyScope::both},
    ScopedKey{{"rabi1", KeyType::number, "Rabi frequency on qubit 1"}, KeyScope::evolve},
    ScopedKey{{"rabi2", KeyType::number, "Rabi frequency on qubit 2"}, KeyScope::evolve},
    ScopedKey{{"detuning1", KeyType::number, "drive detuning of qubit 1"}, KeyScope::evolve},
    ScopedKey{{"detuning2", KeyType::number, "drive detuning of qubit 2"}, KeyScope::evolve},
    ScopedKey{{"omega_c", KeyType::number, "flip-flop coupling omega_xx + omega_yy"}, KeyScope::evolve},
    ScopedKey{{"omega_xx", KeyType::number, "xx coupling"}, KeyScope::evolve},
    ScopedKey{{"omega_yy", KeyType::number, "yy coupling"}, KeyScope::evolve},
    ScopedKey{{"nbar", KeyType::number, "thermal occupation of both baths"}, KeyScope::both},
    ScopedKey{{"nbar1", KeyType::number, "thermal occupation of bath 1"}, KeyScope::both},
    ScopedKey{{"nbar2", KeyType::number, "thermal occupation of bath 2"}, KeyScope::both},
    ScopedKey{{"t_max", KeyType::number, "horizon"}, KeyScope::both},
    ScopedKey{{"dt", KeyType::number, "RK4 step (0 = automatic)"}, KeyScope::both},
    ScopedKey{{"epsilon", KeyType::number, "separability threshold on the concurrence"}, KeyScope::both},
    ScopedKey{{"output", KeyType::string, "output path, - for stdout"}, KeyScope::both},
    ScopedKey{{"format", KeyType::string, "csv | json"}, KeyScope::both},
    ScopedKey{{"param_min", KeyType::number, "parameter axis start"}, KeyScope::scan},
    ScopedKey{{"param_max", KeyType::number, "parameter axis end"}, KeyScope::scan},
    ScopedKey{{"param_steps", KeyType::integer, "parameter axis points"}, KeyScope::scan},
    ScopedKey{{"omega_c_min", KeyType::number, "coupling axis start"}, KeyScope::scan},
    ScopedKey{{"omega_c_max", KeyType::number, "coupling axis end"}, KeyScope::scan},
    ScopedKey{{"omega_c_steps", KeyType::integer, "coupling axis points"}, KeyScope::scan},
    ScopedKey{{"threads", KeyType::integer, "scan workers (0 = automatic)"}, KeyScope::scan},
};

inline const ScopedKey* find_config_key(std::string_view name) {
    for (const auto& k : kConfigKeys)
        if (k.key.name == name) return &k;
    return nullptr;
}

enum class OutputFormat { csv, json };

class RunConfig {
public:
    RunConfig() : values_(nlohmann::json::object()) {}

    /// Parses a flat JSON object. `source` prefixes diagnostics ("file.json:3: ...").
    static RunConfig parse(std::string_view text, std::string source = "<config>") {
        RunConfig cfg;
        cfg.source_ = std::move(source);
        cfg.text_ = std::string(text);

        std::set<std::string> seen;
        std::optional<std::string> duplicate;
        auto on_event = [&](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
            if (depth == 1 && event == nlohmann::json::parse_event_t::key) {
                const std::string key = parsed.get<std::string>();
                if (!seen.insert(key).second && !duplicate) duplicate = key;
            }
            return true;
        };
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(cfg.text_, on_event);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::ConfigError,
                        cfg.source_ + ":" + std::to_string(cfg.line_of_byte(e.byte)) + ": malformed JSON");
        }
        if (!doc.is_object()) throw Error(ErrorCode::ConfigError, cfg.source_ + ":1: document must be a JSON object");
        if (duplicate) cfg.fail(*duplicate, "duplicate key");

        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const ScopedKey* spec = find_config_key(it.key());
            if (!spec) cfg.fail(it.key(), "unknown key");
            const auto& v = it.value();
            switch (spec->key.type) {
            case KeyType::string:
                if (!v.is_string()) cfg.fail(it.key(), "expected a string");
                break;
            case KeyType::number:
                if (!v.is_number()) cfg.fail(it.key(), "expected a number");
                break;
            case KeyType::integer:
                if (!v.is_number_integer()) cfg.fail(it.key(), "expected an integer");
                break;
            }
            cfg.values_[it.key()] = v;
        }
        cfg.check_values();
        return cfg;
    }

    /// Command-line override; `raw` is parsed according to the key's type.
    void set(std::string_view key, std::string_view raw) {
        const ScopedKey* spec = find_config_key(key);
        const std::string name(key);
        overridden_.insert(name);
        if (!spec) fail(name, "unknown key");
        switch (spec->key.type) {
        case KeyType::string: values_[name] = std::string(raw); break;
        case KeyType::number: {
            double v = 0.0;
            try {
                v = io::parse_double(raw);
            } catch (const Error&) {
                fail(name, "expected a number, got '" + std::string(raw) + "'");
            }
            values_[name] = v;
            break;
        }
        case KeyType::integer: {
            long long v = 0;
            const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
                fail(name, "expected an integer, got '" + std::string(raw) + "'");
            values_[name] = v;
            break;
        }
        }
        check_values();
    }

    bool has(std::string_view key) const { return values_.contains(std::string(key)); }

    std::string output() const { return string_or("output", "-"); }

    OutputFormat format() const { return string_or("format", "csv") == "json" ? OutputFormat::json : OutputFormat::csv; }

    Model model() const {
        Model m = Model::kinetic;
        parse_model(string_or("model", "kinetic"), m);
        return m;
    }

    FamilyKind family() const {
        FamilyKind k = FamilyKind::werner;
        parse_family(string_or("family", "werner"), k);
        return k;
    }

    /// Parameters for `evolve`. Defaults: werner f = 1, gamma = 1, rabi = 25,
    /// t_max = 10, dt automatic, epsilon = 1e-6, model kinetic.
    RunSpec run_spec() const {
        reject_scope(KeyScope::scan, "evolve");
        RunSpec spec;
        spec.model = model();
        const FamilyKind kind = family();

        const std::string own(parameter_name(kind));
        std::optional<std::string> param_key;
        for (std::string_view k : {"param", "f", "alpha", "p", "s"}) {
            if (!has(k)) continue;
            if (k != "param" && k != own)
                fail(std::string(k), "does not apply to family " + std::string(family_name(kind)));
            if (param_key) fail(std::string(k), "conflicts with '" + *param_key + "'");
            param_key = std::string(k);
        }
        const double default_param = kind == FamilyKind::egge ? 0.0 : 1.0;
        const double param = param_key ? number(*param_key) : default_param;
        try {
            spec.family = make_family(kind, param);
        } catch (const Error& e) {
            fail(param_key.value_or("family"), e.what());
        }

        SystemParams& p = spec.params;
        p.gamma1 = p.gamma2 = number_or("gamma", 1.0);
        p.gamma1 = number_or("gamma1", p.gamma1);
        p.gamma2 = number_or("gamma2", p.gamma2);
        p.rabi1 = p.rabi2 = number_or("rabi", 25.0);
        p.rabi1 = number_or("rabi1", p.rabi1);
        p.rabi2 = number_or("rabi2", p.rabi2);
        p.detuning1 = number_or("detuning1", 0.0);
        p.detuning2 = number_or("detuning2", 0.0);
        if (has("omega_c") && (has("omega_xx") || has("omega_yy")))
            fail("omega_c", "give either omega_c or omega_xx/omega_yy");
        p.omega_xx = has("omega_c") ? number("omega_c") : number_or("omega_xx", 0.0);
        p.omega_yy = number_or("omega_yy", 0.0);
        p.nbar1 = p.nbar2 = number_or("nbar", 0.0);
        p.nbar1 = number_or("nbar1", p.nbar1);
        p.nbar2 = number_or("nbar2", p.nbar2);

        spec.t_max = number_or("t_max", 10.0);
        spec.dt = number_or("dt", 0.0);
        spec.epsilon = number_or("epsilon", kDefaultEpsilon);
        return spec;
    }

    /// Parameters for `scan`. Axes default to the family's full range and
    /// omega_c in [0, 20], each with 101 points.
    ScanConfig scan_config() const {
        reject_scope(KeyScope::evolve, "scan");
        ScanConfig cfg;
        cfg.family = family();
        cfg.model = model();
        const ParameterRange range = parameter_range(cfg.family);
        cfg.param = {number_or("param_min", range.min), number_or("param_max", range.max),
                     static_cast<int>(integer_or("param_steps", 101))};
        cfg.omega_c = {number_or("omega_c_min", 0.0), number_or("omega_c_max", 20.0),
                       static_cast<int>(integer_or("omega_c_steps", 101))};
        cfg.gamma = number_or("gamma", 1.0);
        cfg.rabi = number_or("rabi", 25.0);
        cfg.nbar1 = cfg.nbar2 = number_or("nbar", 0.0);
        cfg.nbar1 = number_or("nbar1", cfg.nbar1);
        cfg.nbar2 = number_or("nbar2", cfg.nbar2);
        cfg.t_max = number_or("t_max", 10.0);
        cfg.dt = number_or("dt", 0.0);
        cfg.epsilon = number_or("epsilon", kDefaultEpsilon);
        cfg.threads = static_cast<unsigned>(integer_or("threads", 0));

        if (!(cfg.param.min >= range.min && cfg.param.max <= range.max))
            fail(has("param_min") ? "param_min" : "param_max", "parameter axis outside family range");
        if (!(cfg.param.min <= cfg.param.max)) fail("param_min", "must be <= param_max");
        if (!(cfg.omega_c.min <= cfg.omega_c.max)) fail("omega_c_min", "must be <= omega_c_max");
        return cfg;
    }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        std::string where = source_;
        if (overridden_.count(key)) where = "--" + key;
        else if (const int line = line_of_key(key); line > 0) where += ":" + std::to_string(line);
        throw Error(ErrorCode::ConfigError, where + ": key '" + key + "': " + message);
    }

    int line_of_byte(std::size_t byte) const {
        const std::size_t end = std::min(byte, text_.size());
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
    }

    int line_of_key(const std::string& key) const {
        const std::string quoted = "\"" + key + "\"";
        for (std::size_t pos = text_.find(quoted); pos != std::string::npos; pos = text_.find(quoted, pos + 1)) {
            std::size_t after = pos + quoted.size();
            while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
            if (after < text_.size() && text_[after] == ':') return line_of_byte(pos);
        }
        return 0;
    }

    double number(const std::string& key) const { return values_.at(key).get<double>(); }
    double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
    long long integer_or(const std::string& key, long long fallback) const {
        return has(key) ? values_.at(key).get<long long>() : fallback;
    }
    std::string string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? values_.at(key).get<std::string>() : fallback;
    }

    void reject_scope(KeyScope other, std::string_view command) const {
        for (auto it = values_.begin(); it != values_.end(); ++it) {
            if (find_config_key(it.key())->scope == other)
                fail(it.key(), "not used by " + std::string(command));
        }
    }

    // Value checks that do not depend on the subcommand.
    void check_values() const {
        for (auto it = values_.begin(); it != values_.end(); ++it) {
            const std::string& key = it.key();
            const auto& v = it.value();
            const KeyType type = find_config_key(key)->key.type;
            if (type == KeyType::number && !std::isfinite(v.get<double>())) fail(key, "must be finite");
        }
        if (has("model")) {
            Model m;
            if (!parse_model(values_["model"].get<std::string>(), m)) fail("model", "unknown model");
        }
        if (has("family")) {
            FamilyKind k;
            if (!parse_family(values_["family"].get<std::string>(), k)) fail("family", "unknown family");
        }
        if (has("format")) {
            const auto f = values_["format"].get<std::string>();
            if (f != "csv" && f != "json") fail("format", "expected csv or json");
        }
        for (std::string_view k : {"gamma", "gamma1", "gamma2", "nbar", "nbar1", "nbar2", "dt", "epsilon"})
            if (has(k) && number(std::string(k)) < 0.0) fail(std::string(k), "must be >= 0");
        if (has("t_max") && !(number("t_max") > 0.0)) fail("t_max", "must be > 0");
        for (std::string_view k : {"param_steps", "omega_c_steps"})
            if (has(k) && values_[std::string(k)].get<long long>() < 2) fail(std::string(k), "must be >= 2");
        if (has("threads") && values_["threads"].get<long long>() < 0) fail("threads", "must be >= 0");
    }

    nlohmann::json values_;
    std::string source_ = "<config>";
    std::string text_;
    std::set<std::string> overridden_;
};

} // namespace esdlab
