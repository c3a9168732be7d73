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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pdolab/bell.hpp"
#include "pdolab/pdo.hpp"
#include "pdolab/tomography.hpp"

namespace pdolab {

inline constexpr std::string_view kToolName = "pdolab";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Declarative description of one experiment run, loaded from a JSON spec
/// file. Defaults: visibility 1, identity source unitary, sampled mode with
/// 10^5 shots per setting, seed 0, all three outputs.
struct ExperimentSpec {
    double visibility = 1.0;
    ComplexMatrix otc_unitary = ComplexMatrix::identity(2);
    /// Canonical JSON of the otc_unitary spec field ("I", a rotation object,
    /// or an explicit matrix); kept so serialization round-trips exactly.
    std::string otc_unitary_spec = "\"I\"";
    std::uint64_t shots_per_setting = 100000;
    std::uint64_t seed = 0;
    /// False until a seed arrives from file or flag; lets the CLI slot the
    /// environment seed in at lowest precedence.
    bool seed_specified = false;
    RunMode mode = RunMode::sampled;
    std::vector<std::string> outputs = {"report_json", "coefficients_csv", "counts_csv"};
};

/// Parse and validate a spec document. Syntax errors carry 1-based
/// line/column; semantic errors carry the offending field path. Unknown
/// fields are rejected.
ExperimentSpec parse_spec(const std::string &text);

/// Canonical single-line JSON form; parse(serialize(parse(x))) == parse(x).
std::string serialize_spec(const ExperimentSpec &spec);

std::uint64_t fnv1a64(std::string_view s);

/// FNV-1a hash of the canonical spec serialization, as 16 hex digits.
std::string spec_hash(const ExperimentSpec &spec);

struct RunOptions {
    std::size_t bootstrap_resamples = 200;
    bool with_bell = true;
    bool with_disturbance = true;
};

/// Everything one run produces. For a fixed (spec, options) pair the JSON
/// rendering is byte-identical across runs, thread counts, and batch
/// decompositions; no timestamps are embedded.
struct RunReport {
    ExperimentSpec spec;
    std::string spec_digest;
    std::string tool_version;
    ReconstructionReport reconstruction;
    std::map<SlotPair, ChshResult> chsh;
    MonogamyReport monogamy;
    DisturbanceReport disturbance;
    std::map<std::string, PhysicalityReport> physicality;
    /// Per-setting counts, sampled mode only (quorum plus CHSH quartets).
    std::map<std::string, CountsTable> counts;
};

/// Orchestrates the full pipeline: quorum simulation, reconstruction scored
/// against the target operator of the configured source unitary, CHSH for
/// pairs (1,2) and (2,3) from
/// dedicated quartet runs, pair (1,3) from the reconstructed marginal with a
/// bootstrap standard error, the monogamy sums, positivity reports, and the
/// trace-vs-average disturbance witness.
RunReport run(const ExperimentSpec &spec, const RunOptions &options = {});

/// Report sections, selectable per CLI subcommand.
enum class ReportSection { reconstruction, bell, disturbance, physicality };

std::string report_to_json(const RunReport &r, const std::vector<ReportSection> &sections);
std::string report_to_json(const RunReport &r);

} // namespace pdolab
