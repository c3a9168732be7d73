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
#include <string>
#include <variant>
#include <vector>

#include "pdolab/linalg.hpp"
#include "pdolab/pauli.hpp"

namespace pdolab {

/// The two physical carriers. B is tensor slot 0, A is slot 1 of the joint
/// state. A is the carrier measured at two times.
enum class Carrier { B = 0, A = 1 };

std::string to_string(Carrier c);

using Axis = std::array<double, 3>;

Axis axis_x();
Axis axis_y();
Axis axis_z();
Axis axis_from_pauli(Pauli p);
Axis normalized(const Axis &a);
double dot(const Axis &a, const Axis &b);

/// n . sigma for a unit 3-vector n.
ComplexMatrix axis_operator(const Axis &a);

/// The SO(3) rotation R of a 2x2 unitary: u (n . sigma) u^dag = (R n) . sigma.
Matrix3 rotation_of_unitary(const ComplexMatrix &u);

Axis rotate_axis(const Matrix3 &rot, const Axis &a);

/// Renders X/Y/Z for the Pauli axes and [x,y,z] otherwise.
std::string axis_label(const Axis &a);
Axis axis_from_label(const std::string &text);

/// Apply a single-carrier unitary at this point of the timeline.
struct PrepareUnitary {
    Carrier carrier;
    ComplexMatrix u;
};

/// Projective measurement of axis . sigma on one carrier at a tagged time.
struct Measure {
    Carrier carrier;
    std::string time;
    Axis axis{};

    bool operator==(const Measure &) const = default;
};

std::string to_string(const Measure &m);

using TimelineEvent = std::variant<PrepareUnitary, Measure>;

/// Ordered event list over a fixed two-carrier source state. Time tags must
/// strictly increase per carrier (string order), with at most one measurement
/// per (carrier, time).
struct MeasurementTimeline {
    ComplexMatrix initial_state;
    std::vector<TimelineEvent> events;

    std::vector<Measure> measures() const;

    /// Throws std::invalid_argument on an invalid state or event list.
    void validate() const;
};

/// Outcome tuples are one +/-1 entry per Measure event, in event order.
using OutcomeTuple = std::vector<int>;

std::string outcome_tuple_to_string(const OutcomeTuple &o);
OutcomeTuple outcome_tuple_from_string(const std::string &text);

/// Exact joint distribution over outcome tuples; probabilities sum to 1.
struct OutcomeDistribution {
    std::map<OutcomeTuple, double> outcomes;
};

/// Shot tallies for one measurement setting.
struct CountsTable {
    std::vector<Measure> setting;
    std::map<OutcomeTuple, std::uint64_t> counts;
    std::uint64_t shots = 0;

    bool operator==(const CountsTable &) const = default;
};

/// Joint outcome probabilities by sequential projective calculus: events are
/// applied in order, each measurement branching the state through both
/// projector sandwiches rho -> P rho P.
OutcomeDistribution exact_distribution(const MeasurementTimeline &t);

/// Draw `shots` i.i.d. outcomes from exact_distribution(t). Shot i is a pure
/// function of (seed, i): results are reproducible and independent of thread
/// count and batch decomposition. Parallelized with OpenMP when enabled.
CountsTable sample(const MeasurementTimeline &t, std::uint64_t shots, std::uint64_t seed);

/// Serial reference with the identical contract; sample() must agree with it
/// exactly.
CountsTable sample_serial(const MeasurementTimeline &t, std::uint64_t shots, std::uint64_t seed);

/// Mean product of the selected +/-1 outcomes, with standard error
/// (sample standard deviation / sqrt(shots)).
Estimate estimate_correlator(const CountsTable &c, const std::vector<std::size_t> &which);

/// Exact-mode correlator: probability-weighted product, no standard error.
Estimate estimate_correlator(const OutcomeDistribution &d, const std::vector<std::size_t> &which);

/// CSV rows setting,outcome_tuple,count over a map of named settings.
std::string counts_to_csv(const std::map<std::string, CountsTable> &tables);

} // namespace pdolab
