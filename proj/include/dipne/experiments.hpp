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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Experiment runners behind the dipne-sim command line. Each run is a pure
// function of its configuration: no clocks, no ambient randomness, and rows
// are emitted in a fixed order whatever the thread count.
namespace dipne::exp {

/// Invalid, missing or unknown configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { Interference, Kitten, Catfit, Numberdiff, Match, Gaussdrive, OracleCheck };

std::string_view experiment_name(Experiment e);
/// Throws ConfigError listing the valid names.
Experiment parse_experiment(std::string_view name);
const std::vector<Experiment>& all_experiments();

/// Parses "0.25", "-1e-3", "inf", "pi", "pi/5", "2*pi/5", "3/4".
double parse_number(std::string_view text);

/// Flat key=value configuration with per-experiment defaults.
class ExperimentConfig {
  public:
    explicit ExperimentConfig(Experiment e);

    Experiment experiment() const { return experiment_; }

    /// Sets a key; throws ConfigError for keys the experiment does not know.
    void set(const std::string& key, const std::string& value);
    /// Reads "key = value" lines; '#' starts a comment. An "experiment" key,
    /// when present, must match.
    void load_text(std::string_view text);
    void load_file(const std::string& path);

    const std::string& raw(const std::string& key) const;
    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<int> integers(const std::string& key) const;
    std::vector<std::string> strings(const std::string& key) const;

    /// Every key with its effective value, sorted by key.
    const std::map<std::string, std::string>& values() const { return values_; }
    /// Keys accepted by the experiment, with defaults and descriptions.
    struct KeySpec {
        std::string name;
        std::string default_value;
        std::string help;
    };
    static const std::vector<KeySpec>& keys_for(Experiment e);

  private:
    Experiment experiment_;
    std::map<std::string, std::string> values_;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Effective configuration, echoed into the metadata block.
    std::map<std::string, std::string> config;
    std::vector<int> cutoffs;
    /// Largest leakage over every Fock-space state behind the table.
    double max_leakage = 0.0;
    /// Named scalar results (ordered by key).
    std::map<std::string, double> summary;
    /// Free-form notes, one metadata line each.
    std::vector<std::string> notes;

    void add_row(std::vector<Cell> row);
    std::size_t column(std::string_view name) const;
    double number_at(std::size_t row, std::string_view col) const;

    std::string to_csv() const;
    std::string to_json() const;
    /// Line chart of the numeric columns `ys` against `x`; rows are grouped
    /// into one polyline per distinct value of `group` when non-empty.
    std::string to_svg(std::string_view x, const std::vector<std::string>& ys, std::string_view group = {}) const;
};

/// Formats a double in shortest round-trip form; "inf", "-inf", "nan".
std::string format_double(double v);

struct RunResult {
    ResultTable table;
    /// 0 on success, 3 when a tolerance check inside the run failed.
    int exit_code = 0;
};

RunResult run(const ExperimentConfig& config);

RunResult run_interference(const ExperimentConfig& config);
RunResult run_kitten(const ExperimentConfig& config);
RunResult run_catfit(const ExperimentConfig& config);
RunResult run_numberdiff(const ExperimentConfig& config);
RunResult run_match(const ExperimentConfig& config);
RunResult run_gaussdrive(const ExperimentConfig& config);
RunResult run_oracle_check(const ExperimentConfig& config);

/// Default x column and plotted columns for the SVG output of each experiment.
struct PlotSpec {
    std::string x;
    std::vector<std::string> ys;
    std::string group;
};
PlotSpec default_plot(Experiment e);

}  // namespace dipne::exp
