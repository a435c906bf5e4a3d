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

// dipne-sim <experiment> [--config FILE] [--out FILE] [--key value ...] [--json]
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error,
// 3 tolerance breach reported by oracle-check.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dipne/experiments.hpp"

namespace {

using dipne::exp::ConfigError;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

// Applies trailing "--key value" / "--key=value" pairs; dashes in keys
// are read as underscores.
void apply_overrides(dipne::exp::ExperimentConfig& cfg, const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3) throw ConfigError("unexpected argument '" + a + "'");
        std::string key = a.substr(2), value;
        if (auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.resize(eq);
        } else {
            if (i + 1 >= args.size()) throw ConfigError("missing value for --" + key);
            value = args[++i];
        }
        for (auto& ch : key) {
            if (ch == '-') ch = '_';
        }
        cfg.set(key, value);
    }
}

std::string describe_keys() {
    std::string out;
    for (auto e : dipne::exp::all_experiments()) {
        out += std::string(dipne::exp::experiment_name(e)) + ":\n";
        for (const auto& k : dipne::exp::ExperimentConfig::keys_for(e)) {
            out += "  --" + k.name + " (default " + k.default_value + ")  " + k.help + "\n";
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fock-space experiments for displacement-encoded photonic bits"};
    app.set_version_flag("--version", std::string(DIPNE_VERSION));
    app.allow_extras();
    app.footer("Experiment keys:\n" + describe_keys());

    std::string experiment, config_path, out_path, svg_path;
    bool json = false;
    app.add_option("experiment", experiment, "interference | kitten | catfit | numberdiff | match | gaussdrive | oracle-check")
        ->required();
    app.add_option("--config", config_path, "key = value file");
    app.add_option("--out", out_path, "CSV destination (default stdout)");
    app.add_option("--svg", svg_path, "also write a line chart of the table");
    app.add_flag("--json", json, "print a JSON summary to stdout; CSV then only goes to --out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        dipne::exp::ExperimentConfig cfg(dipne::exp::parse_experiment(experiment));
        if (!config_path.empty()) cfg.load_file(config_path);
        apply_overrides(cfg, app.remaining());

        auto result = dipne::exp::run(cfg);
        const auto& table = result.table;
        const std::string csv = table.to_csv();
        if (!out_path.empty()) write_file(out_path, csv);
        if (json) {
            std::cout << table.to_json();
        } else if (out_path.empty()) {
            std::cout << csv;
        }
        if (!svg_path.empty()) {
            auto plot = dipne::exp::default_plot(cfg.experiment());
            if (plot.x == "n0" && cfg.raw("view") == "difference") plot.x = "n0_minus_n1";
            write_file(svg_path, table.to_svg(plot.x, plot.ys, plot.group));
        }
        if (result.exit_code == 3) std::cerr << "dipne-sim: tolerance breach\n";
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "dipne-sim: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dipne-sim: " << e.what() << "\n";
        return 1;
    }
}
