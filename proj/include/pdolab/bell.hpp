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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdolab/pauli.hpp"
#include "pdolab/quantum_sim.hpp"
#include "pdolab/tomography.hpp"

namespace pdolab {

/// Two measurement axes per side of a CHSH test.
struct ChshSettings {
    std::array<Axis, 2> side1;
    std::array<Axis, 2> side2;
};

enum class ChshSource { exact, counts, reconstructed_marginal };

std::string to_string(ChshSource s);

struct ChshResult {
    double value = 0.0;
    double se = 0.0;
    ChshSettings settings;
    /// True when the settings came out of the optimal-value construction
    /// rather than being supplied by the caller.
    bool optimized = false;
    ChshSource source = ChshSource::exact;
};

/// Quartets reaching 2*sqrt(2) on the anticorrelated (T = -I, spatial) and
/// correlated (T = +I, temporal) correlation matrices:
/// side1 = {z, x} for both; side2 = {-(z+x), x-z}/sqrt(2) spatial,
/// {z+x, z-x}/sqrt(2) temporal.
ChshSettings default_spatial_settings();
ChshSettings default_temporal_settings();

/// E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2) with E(a,b) = a^T T b.
double chsh_value(const Matrix3 &T, const ChshSettings &s);

struct ChshOptimum {
    double value = 0.0;
    ChshSettings settings;
};

/// Maximal CHSH value of a correlation matrix, 2*sqrt(m1 + m2) over the two
/// largest eigenvalues of T^T T, together with settings achieving it.
ChshOptimum chsh_optimal(const Matrix3 &T);

/// Combine four correlator estimates in the order E(a1,b1), E(a1,b2),
/// E(a2,b1), E(a2,b2); the standard error is their quadrature sum.
ChshResult chsh_from_correlators(const ChshSettings &s, const std::array<Estimate, 4> &corr,
                                 ChshSource source);

/// CHSH from four two-event counts tables forming a quartet: tables ordered
/// (a1,b1), (a1,b2), (a2,b1), (a2,b2) with event 0 on side 1 and event 1 on
/// side 2. Throws std::invalid_argument unless the axes form a quartet.
ChshResult chsh_from_counts(const std::array<CountsTable, 4> &quartet);

/// Unordered pair of event slots of the three-event operator, e.g. {0,1}.
using SlotPair = std::pair<std::size_t, std::size_t>;

std::string slot_pair_name(const SlotPair &p);

struct MonogamySum {
    SlotPair first_pair;
    SlotPair second_pair;
    std::size_t shared_slot = 0;
    double sum = 0.0;
    double se = 0.0;
    /// (sum - bound) / se; absent when se == 0.
    std::optional<double> sigmas;
};

/// Every pair of CHSH results sharing an event slot, summed against the
/// two-qubit bound C(m,k) + C(n,k) <= 4.
struct MonogamyReport {
    double bound = 4.0;
    std::vector<MonogamySum> sums;
};

MonogamyReport monogamy_check(const std::map<SlotPair, ChshResult> &results);

std::string monogamy_to_json(const MonogamyReport &r);
std::string monogamy_summary_csv(const std::map<SlotPair, ChshResult> &results,
                                 const MonogamyReport &r);

/// Maximum CHSH value over all 16 deterministic +/-1 assignment strategies;
/// equals the local bound 2.
double classical_bound_oracle();

/// Standard error of the optimal CHSH value of the reconstructed slot (0,2)
/// marginal, by multinomial resampling of every quorum counts table and full
/// re-reconstruction per resample. Requires sampled-mode data.
double bootstrap_c13_stderr(const QuorumPlan &plan, const QuorumData &data, std::uint64_t seed,
                            std::size_t resamples = 200);

/// Serial reference for the bootstrap; must agree exactly with the parallel
/// version.
double bootstrap_c13_stderr_serial(const QuorumPlan &plan, const QuorumData &data,
                                   std::uint64_t seed, std::size_t resamples = 200);

} // namespace pdolab
