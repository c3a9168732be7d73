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

#include <cmath>
#include <string>
#include <variant>

#include <doctest.h>

#include "pdolab/errors.hpp"
#include "pdolab/pdo.hpp"
#include "pdolab/tomography.hpp"

using namespace pdolab;

namespace {

int count_non_identity(const PauliString &s) {
    int n = 0;
    for (Pauli p : s) {
        if (p != Pauli::I) {
            ++n;
        }
    }
    return n;
}

} // namespace

TEST_CASE("quorum plan shape") {
    const QuorumPlan plan = build_quorum(1000);
    CHECK(plan.setting_count() == 36);
    REQUIRE(plan.ensembles.size() == 4);
    CHECK(plan.ensembles[0].name == "temporal_AA");
    CHECK(plan.ensembles[1].name == "spatial_BA_t1");
    CHECK(plan.ensembles[2].name == "spatial_BA_t2");
    CHECK(plan.ensembles[3].name == "threepoint");
    for (const Ensemble &e : plan.ensembles) {
        CHECK(e.settings.size() == 9);
        CHECK(e.shots_per_setting == 1000);
    }

    const QuorumSetting *s = plan.find("temporal_AA/XY");
    REQUIRE(s != nullptr);
    REQUIRE(s->measures.size() == 2);
    CHECK(s->measures[0].carrier == Carrier::A);
    CHECK(s->measures[0].time == "t1");
    CHECK(s->measures[0].axis == axis_x());
    CHECK(s->measures[1].time == "t2");
    CHECK(s->measures[1].axis == axis_y());

    // Three-point settings share the A axis between t1 and t2.
    for (const QuorumSetting &tp : plan.ensembles[3].settings) {
        REQUIRE(tp.measures.size() == 3);
        CHECK(tp.measures[0].carrier == Carrier::B);
        CHECK(tp.measures[1].axis == tp.measures[2].axis);
    }
    CHECK(plan.find("nonexistent") == nullptr);
}

TEST_CASE("make_timeline inserts the source unitary only when needed") {
    SourceModel plain;
    plain.visibility = 0.9;
    const std::vector<Measure> with_t2 = {Measure{Carrier::B, "t1", axis_z()},
                                          Measure{Carrier::A, "t2", axis_z()}};
    CHECK(make_timeline(with_t2, plain).events.size() == 2);

    SourceModel rotated;
    rotated.otc_unitary = pauli_matrix(Pauli::X);
    CHECK(make_timeline(with_t2, rotated).events.size() == 3);

    // No t2 measurement, no insertion.
    const std::vector<Measure> only_t1 = {Measure{Carrier::B, "t1", axis_z()},
                                          Measure{Carrier::A, "t1", axis_z()}};
    CHECK(make_timeline(only_t1, rotated).events.size() == 2);

    // The initial state is the Werner state of the requested visibility.
    CHECK(make_timeline(only_t1, plain).initial_state.max_abs_diff(werner(0.9)) < 1e-15);
}

TEST_CASE("measure_quorum produces one record per setting") {
    const QuorumPlan plan = build_quorum(500);
    const SourceModel src;

    const QuorumData exact = measure_quorum(plan, src, RunMode::exact, 0);
    CHECK(exact.size() == 36);
    CHECK(std::holds_alternative<OutcomeDistribution>(exact.at("temporal_AA/ZZ")));

    const QuorumData sampled = measure_quorum(plan, src, RunMode::sampled, 11);
    CHECK(sampled.size() == 36);
    const auto &counts = std::get<CountsTable>(sampled.at("threepoint/XX"));
    CHECK(counts.shots == 500);
    REQUIRE(counts.setting.size() == 3);

    // Same seed, same data; different seed, different data somewhere.
    const QuorumData again = measure_quorum(plan, src, RunMode::sampled, 11);
    CHECK(std::get<CountsTable>(again.at("threepoint/XX")) == counts);
    const QuorumData other = measure_quorum(plan, src, RunMode::sampled, 12);
    bool any_difference = false;
    for (const auto &[id, sd] : other) {
        if (std::get<CountsTable>(sd) != std::get<CountsTable>(sampled.at(id))) {
            any_difference = true;
        }
    }
    CHECK(any_difference);
}

TEST_CASE("exact reconstruction closes on the canonical operator") {
    const QuorumPlan plan = build_quorum(1);
    const QuorumData data = measure_quorum(plan, SourceModel{}, RunMode::exact, 0);
    const ReconstructionReport rep = reconstruct(plan, data);

    CHECK(rep.max_coefficient_error < 1e-12);
    CHECK(rep.pdo.matrix.max_abs_diff(otc_pdo().matrix) < 1e-12);
    CHECK(rep.pdo.provenance == Provenance::reconstructed);
    CHECK(rep.fidelity_12 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.fidelity_13 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(to_string(rep.completion_policy) == "zero_fill");

    // 64 coefficients: every string present, zero-filled ones tagged by a
    // missing standard error and an exactly zero value.
    CHECK(rep.table.entries.size() == 64);
    int zero_filled = 0;
    for (const auto &[s, est] : rep.table.entries) {
        if (count_non_identity(s) == 3 && !(s[1] == s[2])) {
            CHECK(est.value == 0.0);
            CHECK(!est.se.has_value());
            ++zero_filled;
        }
    }
    CHECK(zero_filled == 18);
}

TEST_CASE("exact reconstruction closes under a source unitary") {
    SourceModel src;
    src.otc_unitary = pauli_matrix(Pauli::X);
    const QuorumPlan plan = build_quorum(1);
    const QuorumData data = measure_quorum(plan, src, RunMode::exact, 0);
    const ReconstructionReport rep = reconstruct(plan, data, otc_pdo(src.otc_unitary));
    CHECK(rep.max_coefficient_error < 1e-12);
    CHECK(rep.pdo.matrix.max_abs_diff(otc_pdo(pauli_matrix(Pauli::X)).matrix) < 1e-12);
    CHECK(rep.fidelity_12 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.fidelity_13 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("incomplete quorum is rejected with the missing ids") {
    const QuorumPlan plan = build_quorum(1);
    QuorumData data = measure_quorum(plan, SourceModel{}, RunMode::exact, 0);
    data.erase("spatial_BA_t2/YZ");
    data.erase("threepoint/ZZ");
    try {
        reconstruct_table(plan, data);
        FAIL("expected IncompleteQuorumError");
    } catch (const IncompleteQuorumError &e) {
        const std::string what = e.what();
        CHECK(what.find("spatial_BA_t2/YZ") != std::string::npos);
        CHECK(what.find("threepoint/ZZ") != std::string::npos);
        REQUIRE(e.missing_settings().size() == 2);
    }
}

TEST_CASE("tampered counts are rejected") {
    const QuorumPlan plan = build_quorum(100);
    QuorumData data = measure_quorum(plan, SourceModel{}, RunMode::sampled, 5);
    auto &counts = std::get<CountsTable>(data.at("temporal_AA/XX"));
    counts.setting[0].axis = axis_y(); // no longer matches the plan
    CHECK_THROWS_AS(reconstruct_table(plan, data), std::invalid_argument);
}

TEST_CASE("sampled reconstruction carries standard errors") {
    SourceModel src;
    src.visibility = 0.9; // keep the spatial settings genuinely random
    const QuorumPlan plan = build_quorum(20000);
    const QuorumData data = measure_quorum(plan, src, RunMode::sampled, 21);
    const CorrelationTable t = reconstruct_table(plan, data);

    // Measured strings have errors; estimates sit within 5 sigma of truth.
    const Estimate &zzi = t.entries.at(pauli_string_from_text("ZZI"));
    REQUIRE(zzi.se.has_value());
    CHECK(*zzi.se > 0.0);
    CHECK(std::abs(zzi.value - (-0.9)) <= 5.0 * *zzi.se + 1e-9);

    // Repeating the same observable at both times is deterministic, at any
    // visibility: the estimate is exact with zero spread.
    const Estimate &izz = t.entries.at(pauli_string_from_text("IZZ"));
    REQUIRE(izz.se.has_value());
    CHECK(izz.value == 1.0);
    CHECK(*izz.se == 0.0);

    // 1-body strings are measured in several ensembles; the combined error
    // must beat the best single-ensemble error, and the value stays near 0.
    const Estimate &iiz = t.entries.at(pauli_string_from_text("IIZ"));
    REQUIRE(iiz.se.has_value());
    const double single_setting_se = 1.0 / std::sqrt(20000.0);
    CHECK(*iiz.se < single_setting_se);
    CHECK(std::abs(iiz.value) <= 5.0 * *iiz.se);
}

TEST_CASE("disturbance witness separates trace from measure-and-average") {
    const DisturbanceReport ideal = disturbance_demo();
    CHECK(ideal.no_t1_measurement == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ideal.with_t1_measurement == doctest::Approx(0.0).epsilon(1e-12));

    const DisturbanceReport noisy = disturbance_demo(0.6);
    CHECK(noisy.no_t1_measurement == doctest::Approx(-0.6).epsilon(1e-12));
    CHECK(noisy.with_t1_measurement == doctest::Approx(0.0).epsilon(1e-12));

    // Measuring along z at t1 commutes with the later z readout: the
    // intervening measurement is then invisible.
    const DisturbanceReport commuting = disturbance_demo(0.6, axis_z());
    CHECK(commuting.with_t1_measurement == doctest::Approx(-0.6).epsilon(1e-12));
}
