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
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dipne/experiments.hpp"

namespace dipne::exp {

namespace {

using KeySpec = ExperimentConfig::KeySpec;

const std::vector<KeySpec> kInterferenceKeys = {
    {"theta_split", "pi/5", "splitting angle of the first beamsplitter layer"},
    {"theta_recomb", "pi/10", "angle of the recombining beamsplitters"},
    {"phase", "0", "phase on the erasure modes between the layers: 0 or pi"},
    {"families", "vacuum,photon0,photon-both,photon-both+squeeze-i", "input cores to displace"},
    {"total_photons", "1", "displacement photons shared between the two inputs"},
    {"fraction_steps", "11", "number of evenly spaced fractions in [0, 1]"},
    {"cutoff", "30", "Fock cutoff of every mode"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kKittenKeys = {
    {"theta_sub", "pi/5", "subtraction beamsplitter angle"},
    {"squeeze_photons", "1,2,3,4,5,6,8,10,12,15,20", "input squeezing sweep, sinh^2 r"},
    {"include_infinite", "true", "append the infinite-squeezing limit rows"},
    {"k", "1,3,5,7,9", "subtracted photon counts"},
    {"cutoff", "1000", "Fock cutoff of the output mode"},
    {"budget", "component", "photon budget of the cat candidates: component or state"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kCatfitKeys = {
    {"theta_sub", "pi/5,pi/6,pi/7,pi/8,pi/10,pi/12", "subtraction angles"},
    {"squeeze_photons", "inf", "input squeezing, sinh^2 r, or inf"},
    {"k", "1,3,5,7,9", "subtracted photon counts"},
    {"cutoff", "1500", "Fock cutoff of the output mode"},
    {"budget", "component", "photon budget of the cat candidates: component or state"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kNumberdiffKeys = {
    {"k", "1,2,3,4", "subtracted photon counts"},
    {"squeeze_photons", "10", "input squeezing, sinh^2 r"},
    {"theta_sub", "pi/5", "subtraction beamsplitter angle"},
    {"cutoff", "100", "Fock cutoff of both modes"},
    {"lo_rule", "sqrt_plus_2", "local oscillator amplitude: sqrt_plus_2 = sqrt(n)+2, sqrt_of_plus_2 = sqrt(n+2)"},
    {"view", "joint", "joint (k, n0, n1) table or difference (k, n0 - n1) marginal"},
    {"min_probability", "1e-14", "joint rows below this probability are omitted"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kMatchKeys = {
    {"k_source", "1,3,5,7,9", "source kitten photon counts"},
    {"k_target", "1,3,5,7,9", "target kitten photon counts"},
    {"theta_sub", "pi/5", "subtraction beamsplitter angle"},
    {"squeeze_photons", "inf", "input squeezing of the kittens, sinh^2 r, or inf"},
    {"cutoff", "1000", "Fock cutoff of the kitten mode"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kGaussdriveKeys = {
    {"d0", "1", "initial displacements"},
    {"r0_photons", "0.1,0.5,1", "initial antisqueezing, sinh^2 r0"},
    {"r_max", "4", "largest added antisqueezing"},
    {"r_steps", "41", "points in the r sweep, including 0 and r_max"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

const std::vector<KeySpec> kOracleKeys = {
    {"seed", "1", "seed of the circuit enumerator"},
    {"circuits", "100", "number of enumerated circuits; circuit 0 is empty"},
    {"cutoff", "60", "Fock cutoff of every mode"},
    {"max_modes", "3", "largest number of modes in a circuit"},
    {"r_max", "0.5", "largest squeezing magnitude"},
    {"alpha_max", "2", "largest displacement magnitude"},
    {"c_equal_max", "8", "c_equal is checked against brute force for n, m up to this"},
    {"tol_photons", "1e-6", "tolerance on per-mode mean photon number"},
    {"tol_quadrature", "1e-8", "tolerance on quadrature means"},
    {"tol_c_equal", "1e-9", "tolerance on c_equal"},
    {"threads", "0", "worker threads; 0 uses the hardware concurrency"},
};

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        auto item = trim(text.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

double parse_factor(std::string_view tok, std::string_view whole) {
    if (tok == "pi") return std::numbers::pi;
    if (tok == "inf" || tok == "infinite" || tok == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ConfigError("cannot parse number '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Interference: return "interference";
        case Experiment::Kitten: return "kitten";
        case Experiment::Catfit: return "catfit";
        case Experiment::Numberdiff: return "numberdiff";
        case Experiment::Match: return "match";
        case Experiment::Gaussdrive: return "gaussdrive";
        case Experiment::OracleCheck: return "oracle-check";
    }
    return "?";
}

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> all = {
        Experiment::Interference, Experiment::Kitten,     Experiment::Catfit,      Experiment::Numberdiff,
        Experiment::Match,        Experiment::Gaussdrive, Experiment::OracleCheck,
    };
    return all;
}

Experiment parse_experiment(std::string_view name) {
    std::string valid;
    for (auto e : all_experiments()) {
        if (experiment_name(e) == name) return e;
        if (!valid.empty()) valid += ", ";
        valid += experiment_name(e);
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "' (valid: " + valid + ")");
}

double parse_number(std::string_view text) {
    auto s = trim(text);
    if (s.empty()) throw ConfigError("empty number");
    double sign = 1.0;
    if (s.front() == '-' || s.front() == '+') {
        if (s.front() == '-') sign = -1.0;
        s.remove_prefix(1);
    }
    double value = 1.0;
    char op = '*';
    std::size_t pos = 0;
    while (true) {
        auto next = s.find_first_of("*/", pos);
        auto tok = trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (tok.empty()) throw ConfigError("cannot parse number '" + std::string(text) + "'");
        double f = parse_factor(tok, text);
        value = op == '*' ? value * f : value / f;
        if (next == std::string_view::npos) break;
        op = s[next];
        pos = next + 1;
    }
    return sign * value;
}

ExperimentConfig::ExperimentConfig(Experiment e) : experiment_(e) {
    for (const auto& k : keys_for(e)) values_[k.name] = k.default_value;
}

const std::vector<ExperimentConfig::KeySpec>& ExperimentConfig::keys_for(Experiment e) {
    switch (e) {
        case Experiment::Interference: return kInterferenceKeys;
        case Experiment::Kitten: return kKittenKeys;
        case Experiment::Catfit: return kCatfitKeys;
        case Experiment::Numberdiff: return kNumberdiffKeys;
        case Experiment::Match: return kMatchKeys;
        case Experiment::Gaussdrive: return kGaussdriveKeys;
        case Experiment::OracleCheck: return kOracleKeys;
    }
    throw ConfigError("unknown experiment");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        std::string valid;
        for (const auto& k : keys_for(experiment_)) {
            if (!valid.empty()) valid += ", ";
            valid += k.name;
        }
        throw ConfigError("unknown key '" + key + "' for experiment " + std::string(experiment_name(experiment_)) +
                          " (valid: " + valid + ")");
    }
    auto v = trim(value);
    if (v.empty()) throw ConfigError("key '" + key + "' has an empty value");
    it->second = std::string(v);
}

void ExperimentConfig::load_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view l = line;
        if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        auto eq = l.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key(trim(l.substr(0, eq)));
        std::string value(trim(l.substr(eq + 1)));
        if (key == "experiment") {
            if (parse_experiment(value) != experiment_) {
                throw ConfigError("config is for experiment '" + value + "', not " +
                                  std::string(experiment_name(experiment_)));
            }
            continue;
        }
        set(key, value);
    }
}

void ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str());
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
    try {
        return parse_number(raw(key));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

int ExperimentConfig::integer(const std::string& key) const {
    double v = number(key);
    if (!(std::abs(v) < 2147483647.0) || v != std::floor(v)) {
        throw ConfigError(key + ": expected an integer, got '" + raw(key) + "'");
    }
    return static_cast<int>(v);
}

bool ExperimentConfig::flag(const std::string& key) const {
    const auto& v = raw(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> ExperimentConfig::strings(const std::string& key) const {
    auto out = split_list(raw(key));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : strings(key)) {
        try {
            out.push_back(parse_number(s));
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& key) const {
    std::vector<int> out;
    for (double v : numbers(key)) {
        if (!(std::abs(v) < 2147483647.0) || v != std::floor(v)) {
            throw ConfigError(key + ": expected integers, got '" + raw(key) + "'");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace dipne::exp
