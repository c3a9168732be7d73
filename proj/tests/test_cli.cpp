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

// End-to-end tests of the installed command-line binary, driven through the
// shell. PDOLAB_CLI_PATH is injected by the build.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#ifndef PDOLAB_CLI_PATH
#error "PDOLAB_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pdolab_cli_test_" + std::to_string(static_cast<unsigned>(::getpid())));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_shell(const std::string &command) {
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path &p, const std::string &body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

const std::string kCli = std::string("\"") + PDOLAB_CLI_PATH + "\"";

} // namespace

TEST_CASE("run subcommand writes the three artifacts") {
    TempDir tmp;
    const fs::path out = tmp.path / "out";
    const int rc = run_shell(kCli + " run --exact --out \"" + out.string() + "\" > /dev/null");
    CHECK(rc == 0);
    REQUIRE(fs::exists(out / "report.json"));
    REQUIRE(fs::exists(out / "coefficients.csv"));
    REQUIRE(fs::exists(out / "counts.csv"));

    const nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report.contains("chsh"));
    CHECK(report.contains("reconstruction"));
    CHECK(report.contains("disturbance"));
    CHECK(report.contains("physicality"));
    CHECK(report["spec"]["mode"] == "exact");

    const std::string coeffs = slurp(out / "coefficients.csv");
    CHECK(coeffs.rfind("string,value,stderr\n", 0) == 0);
    // Exact mode: counts CSV is just the header.
    CHECK(slurp(out / "counts.csv") == "setting,outcome_tuple,count\n");
}

TEST_CASE("tomo subcommand restricts the report") {
    TempDir tmp;
    const fs::path out = tmp.path / "out";
    const int rc = run_shell(kCli + " tomo --exact --out \"" + out.string() + "\" > /dev/null");
    CHECK(rc == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report.contains("reconstruction"));
    CHECK(report.contains("physicality"));
    CHECK(!report.contains("chsh"));
    CHECK(!report.contains("disturbance"));
}

TEST_CASE("chsh subcommand prints the monogamy summary") {
    TempDir tmp;
    const fs::path out = tmp.path / "out";
    const fs::path log = tmp.path / "stdout.txt";
    const int rc = run_shell(kCli + " chsh --exact --out \"" + out.string() + "\" > \"" +
                             log.string() + "\"");
    CHECK(rc == 0);
    const std::string text = slurp(log);
    CHECK(text.find("quantity,value,stderr,sigmas") != std::string::npos);
    CHECK(text.find("sum_12_23,5.65685") != std::string::npos);
    const nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report.contains("chsh"));
    CHECK(!report.contains("reconstruction"));
}

TEST_CASE("demo-disturbance prints the witness pair") {
    TempDir tmp;
    const fs::path log = tmp.path / "stdout.txt";
    const int rc = run_shell(kCli + " demo-disturbance > \"" + log.string() + "\"");
    CHECK(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(log));
    CHECK(j["no_t1_measurement"].get<double>() == doctest::Approx(-1.0));
    CHECK(j["with_t1_measurement"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("seed precedence: flag beats file beats environment") {
    TempDir tmp;
    const fs::path spec_with_seed = tmp.path / "seeded.json";
    const fs::path spec_plain = tmp.path / "plain.json";
    write(spec_with_seed, "{\"seed\": 7}");
    write(spec_plain, "{}");
    const fs::path out = tmp.path / "out";
    const auto seed_of = [&] {
        return nlohmann::json::parse(slurp(out / "report.json"))["spec"]["seed"].get<long>();
    };

    // Environment only.
    REQUIRE(run_shell("PDOLAB_SEED=5 " + kCli + " tomo \"" + spec_plain.string() +
                      "\" --exact --out \"" + out.string() + "\" > /dev/null") == 0);
    CHECK(seed_of() == 5);

    // File beats environment.
    REQUIRE(run_shell("PDOLAB_SEED=5 " + kCli + " tomo \"" + spec_with_seed.string() +
                      "\" --exact --out \"" + out.string() + "\" > /dev/null") == 0);
    CHECK(seed_of() == 7);

    // Flag beats both.
    REQUIRE(run_shell("PDOLAB_SEED=5 " + kCli + " tomo \"" + spec_with_seed.string() +
                      "\" --exact --seed 9 --out \"" + out.string() + "\" > /dev/null") == 0);
    CHECK(seed_of() == 9);

    // No source at all: default 0.
    REQUIRE(run_shell(kCli + " tomo \"" + spec_plain.string() + "\" --exact --out \"" +
                      out.string() + "\" > /dev/null") == 0);
    CHECK(seed_of() == 0);
}

TEST_CASE("exit codes distinguish failure classes") {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.json";
    write(bad, "{\"source\":{\"visibility\": 2}}");
    CHECK(run_shell(kCli + " run \"" + bad.string() + "\" 2> /dev/null") == 2);

    const fs::path syntax = tmp.path / "syntax.json";
    write(syntax, "{oops");
    CHECK(run_shell(kCli + " run \"" + syntax.string() + "\" 2> /dev/null") == 2);

    CHECK(run_shell(kCli + " run /nonexistent/spec.json 2> /dev/null") == 2);
    CHECK(run_shell("PDOLAB_SEED=banana " + kCli + " tomo --exact 2> /dev/null") == 2);
    CHECK(run_shell(kCli + " frobnicate 2> /dev/null") == 2);
}

TEST_CASE("shot and visibility flags override the spec file") {
    TempDir tmp;
    const fs::path spec = tmp.path / "spec.json";
    write(spec, "{\"shots_per_setting\": 1000, \"source\": {\"visibility\": 1.0}}");
    const fs::path out = tmp.path / "out";
    REQUIRE(run_shell(kCli + " tomo \"" + spec.string() + "\" --exact --shots 555" +
                      " --visibility 0.25 --out \"" + out.string() + "\" > /dev/null") == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report["spec"]["shots_per_setting"].get<long>() == 555);
    CHECK(report["spec"]["source"]["visibility"].get<double>() == doctest::Approx(0.25));
}
