// Copyright 2026 The pdolab Authors
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

// Command-line driver. Subcommands:
//   run <spec-file>    full pipeline (reconstruction, CHSH, monogamy, ...)
//   tomo <spec-file>   quorum measurement and reconstruction only
//   chsh <spec-file>   Bell analysis; prints the monogamy summary CSV
//   demo-disturbance   trace-vs-average witness for the temporal slot
// Exit codes: 0 success, 2 spec error, 3 incomplete quorum, 4 internal error.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdolab/errors.hpp"
#include "pdolab/experiment.hpp"

namespace {

using namespace pdolab;

struct CommonArgs {
    std::string spec_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<double> visibility;
    bool exact = false;
    std::string out_dir = ".";
};

void add_common_flags(CLI::App *cmd, CommonArgs &args, bool with_spec_file) {
    if (with_spec_file) {
        cmd->add_option("spec-file", args.spec_path, "Experiment spec (JSON document)");
    }
    cmd->add_option("--seed", args.seed, "Master seed (overrides spec file and PDOLAB_SEED)");
    cmd->add_option("--shots", args.shots, "Shots per measurement setting");
    cmd->add_option("--visibility", args.visibility, "Source visibility in [0, 1]");
    cmd->add_flag("--exact", args.exact, "Exact expectation values instead of sampling");
    cmd->add_option("--out", args.out_dir, "Directory for report.json / coefficients.csv / counts.csv")
        ->capture_default_str();
}

std::uint64_t parse_env_seed(std::string_view text) {
    const bool neg = !text.empty() && text.front() == '-';
    const std::string_view digits = neg ? text.substr(1) : text;
    std::uint64_t mag = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mag);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw SpecError("PDOLAB_SEED must be an integer, got \"" + std::string(text) + "\"");
    }
    return neg ? ~mag + 1 : mag;
}

ExperimentSpec resolve_spec(const CommonArgs &args) {
    ExperimentSpec spec;
    if (!args.spec_path.empty()) {
        std::ifstream in(args.spec_path, std::ios::binary);
        if (!in) {
            throw SpecError("cannot read spec file: " + args.spec_path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        spec = parse_spec(buf.str());
    }
    if (args.visibility) {
        if (*args.visibility < 0.0 || *args.visibility > 1.0) {
            throw SpecError("--visibility must lie in [0, 1]");
        }
        spec.visibility = *args.visibility;
    }
    if (args.shots) {
        if (*args.shots == 0) {
            throw SpecError("--shots must be at least 1");
        }
        spec.shots_per_setting = *args.shots;
    }
    if (args.exact) {
        spec.mode = RunMode::exact;
    }
    if (args.seed) {
        spec.seed = *args.seed;
        spec.seed_specified = true;
    } else if (!spec.seed_specified) {
        if (const char *env = std::getenv("PDOLAB_SEED")) {
            spec.seed = parse_env_seed(env);
            spec.seed_specified = true;
        }
    }
    return spec;
}

void write_file(const std::filesystem::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void write_outputs(const RunReport &rep, const CommonArgs &args,
                   const std::vector<ReportSection> &sections) {
    const std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    for (const auto &kind : rep.spec.outputs) {
        std::filesystem::path path;
        if (kind == "report_json") {
            path = dir / "report.json";
            write_file(path, report_to_json(rep, sections));
        } else if (kind == "coefficients_csv") {
            path = dir / "coefficients.csv";
            write_file(path, table_to_csv(rep.reconstruction.table));
        } else if (kind == "counts_csv") {
            path = dir / "counts.csv";
            write_file(path, counts_to_csv(rep.counts));
        }
        std::cout << "wrote " << path.string() << "\n";
    }
}

enum class Command { run, tomo, chsh };

int run_command(const CommonArgs &args, Command which) {
    const ExperimentSpec spec = resolve_spec(args);
    RunOptions options;
    std::vector<ReportSection> sections;
    switch (which) {
        case Command::run:
            sections = {ReportSection::reconstruction, ReportSection::bell,
                        ReportSection::disturbance, ReportSection::physicality};
            break;
        case Command::tomo:
            options.with_bell = false;
            options.with_disturbance = false;
            sections = {ReportSection::reconstruction, ReportSection::physicality};
            break;
        case Command::chsh:
            options.with_disturbance = false;
            sections = {ReportSection::bell};
            break;
    }
    const RunReport rep = run(spec, options);
    write_outputs(rep, args, sections);
    if (which == Command::chsh) {
        std::cout << monogamy_summary_csv(rep.chsh, rep.monogamy);
    }
    return 0;
}

int demo_disturbance_command(const CommonArgs &args) {
    const ExperimentSpec spec = resolve_spec(args);
    const DisturbanceReport d = disturbance_demo(spec.visibility);
    nlohmann::json j;
    j["visibility"] = spec.visibility;
    j["no_t1_measurement"] = d.no_t1_measurement;
    j["with_t1_measurement"] = d.with_t1_measurement;
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Two-time measurement simulator and pseudo-density-operator toolkit"};
    app.require_subcommand(1);

    CommonArgs run_args, tomo_args, chsh_args, demo_args;
    CLI::App *cmd_run = app.add_subcommand("run", "Full pipeline: quorum, reconstruction, CHSH, "
                                                  "monogamy, disturbance");
    add_common_flags(cmd_run, run_args, true);
    CLI::App *cmd_tomo = app.add_subcommand("tomo", "Quorum measurement and reconstruction only");
    add_common_flags(cmd_tomo, tomo_args, true);
    CLI::App *cmd_chsh = app.add_subcommand("chsh", "Bell analysis and monogamy summary");
    add_common_flags(cmd_chsh, chsh_args, true);
    CLI::App *cmd_demo = app.add_subcommand("demo-disturbance",
                                            "Show that tracing out the intermediate event differs "
                                            "from measuring and averaging it");
    add_common_flags(cmd_demo, demo_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_run->parsed()) {
            return run_command(run_args, Command::run);
        }
        if (cmd_tomo->parsed()) {
            return run_command(tomo_args, Command::tomo);
        }
        if (cmd_chsh->parsed()) {
            return run_command(chsh_args, Command::chsh);
        }
        if (cmd_demo->parsed()) {
            return demo_disturbance_command(demo_args);
        }
    } catch (const SpecError &e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const IncompleteQuorumError &e) {
        std::cerr << "incomplete quorum: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
