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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdolab/pdo.hpp"
#include "pdolab/quantum_sim.hpp"

namespace pdolab {

// The three event slots of the reconstructed operator, in slot order:
// slot 0 = Q1 = carrier B at t1, slot 1 = Q2 = carrier A at t1,
// slot 2 = Q3 = carrier A at t2.

/// One measurement setting of the quorum: a stable id and the measurements in
/// event order.
struct QuorumSetting {
    std::string id;
    std::vector<Measure> measures;
};

struct Ensemble {
    std::string name;
    std::vector<QuorumSetting> settings;
    std::uint64_t shots_per_setting = 0;
};

/// The restricted quorum: three 2-point ensembles covering all 9 axis pairs
/// each, plus a 3-point ensemble confined to settings whose two A-side
/// measurements share an axis (sequential measurements of the same observable
/// commute, so they admit a joint record).
struct QuorumPlan {
    std::vector<Ensemble> ensembles;

    std::size_t setting_count() const;
    const QuorumSetting *find(const std::string &id) const;
};

/// Names: temporal_AA (A@t1 x A@t2), spatial_BA_t1 (B x A@t1),
/// spatial_BA_t2 (B x A@t2), threepoint (B x A@t1 x A@t2, equal A axes).
/// 9 settings each, 36 total.
QuorumPlan build_quorum(std::uint64_t shots_per_setting);

/// Per-setting statistics: exact distribution (exact mode) or shot counts
/// (sampled mode), keyed by setting id.
using SettingData = std::variant<OutcomeDistribution, CountsTable>;
using QuorumData = std::map<std::string, SettingData>;

/// Source under test: a Werner state of the given visibility, with the
/// optional unitary applied to carrier A between t1 and t2.
struct SourceModel {
    double visibility = 1.0;
    ComplexMatrix otc_unitary = ComplexMatrix::identity(2);
};

enum class RunMode { exact, sampled };

/// Timeline realizing one setting against the source: the measurements in
/// order, with the source unitary inserted on A before its t2 measurement.
MeasurementTimeline make_timeline(const std::vector<Measure> &measures, const SourceModel &src);

/// Evaluate (exact) or sample (sampled) every setting of the plan. Setting
/// number k in plan order draws from the substream derive_seed(master_seed, k).
QuorumData measure_quorum(const QuorumPlan &plan, const SourceModel &src, RunMode mode,
                          std::uint64_t master_seed);

enum class CompletionPolicy { zero_fill };

std::string to_string(CompletionPolicy p);

/// Reconstruction output: the assembled operator, its coefficient table with
/// standard errors, the largest coefficient deviation from the target, and
/// singlet fidelities of the two physical marginals (slots 0,1 and 0,2).
struct ReconstructionReport {
    PseudoDensityOperator pdo;
    CorrelationTable table;
    double max_coefficient_error = 0.0;
    double fidelity_12 = 0.0;
    double fidelity_13 = 0.0;
    CompletionPolicy completion_policy = CompletionPolicy::zero_fill;
};

/// Linear-inversion coefficient table from complete quorum data: 2-body
/// coefficients from their dedicated ensembles, 3-body equal-A-axis
/// coefficients from the threepoint ensemble, 1-body coefficients
/// inverse-variance-combined over every setting that measures the event, and
/// the 18 unmeasurable cross-A-axis 3-body strings zero-filled. Throws
/// IncompleteQuorumError when settings are missing.
CorrelationTable reconstruct_table(const QuorumPlan &plan, const QuorumData &data);

/// Full reconstruction scored against a target (default: the canonical
/// three-event operator with identity unitary). No positivity projection is
/// applied anywhere: negative eigenvalues are signal.
ReconstructionReport reconstruct(const QuorumPlan &plan, const QuorumData &data,
                                 const PseudoDensityOperator &target = otc_pdo());

/// Operational witness that tracing out the t1 event differs from measuring
/// it and averaging.
struct DisturbanceReport {
    /// <Z_B Z_A(t2)> with nothing touching A at t1. Equals -visibility.
    double no_t1_measurement = 0.0;
    /// Same correlator with an intervening measurement on A at t1, averaged
    /// over its outcome. Equals 0 for an X intervening measurement.
    double with_t1_measurement = 0.0;
};

DisturbanceReport disturbance_demo(double visibility = 1.0, const Axis &intervening = axis_x());

} // namespace pdolab
