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

#include "pdolab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdolab/errors.hpp"
#include "pdolab/rng.hpp"

namespace pdolab {

namespace {

constexpr Pauli kAxes[3] = {Pauli::X, Pauli::Y, Pauli::Z};

struct SlotEvent {
    Carrier carrier;
    const char *time;
};

// Event slots of the reconstructed operator, in slot order.
constexpr SlotEvent kSlots[3] = {
    {Carrier::B, "t1"},
    {Carrier::A, "t1"},
    {Carrier::A, "t2"},
};

Measure slot_measure(std::size_t slot, Pauli axis) {
    return Measure{kSlots[slot].carrier, kSlots[slot].time, axis_from_pauli(axis)};
}

std::optional<Pauli> pauli_from_axis(const Axis &a) {
    for (Pauli p : kAxes) {
        if (a == axis_from_pauli(p)) {
            return p;
        }
    }
    return std::nullopt;
}

// Index of the measurement of the given slot's event within a setting's
// outcome tuple.
std::optional<std::size_t> event_index(const std::vector<Measure> &measures, std::size_t slot) {
    for (std::size_t k = 0; k < measures.size(); ++k) {
        if (measures[k].carrier == kSlots[slot].carrier && measures[k].time == kSlots[slot].time) {
            return k;
        }
    }
    return std::nullopt;
}

} // namespace

std::size_t QuorumPlan::setting_count() const {
    std::size_t n = 0;
    for (const auto &e : ensembles) {
        n += e.settings.size();
    }
    return n;
}

const QuorumSetting *QuorumPlan::find(const std::string &id) const {
    for (const auto &e : ensembles) {
        for (const auto &s : e.settings) {
            if (s.id == id) {
                return &s;
            }
        }
    }
    return nullptr;
}

QuorumPlan build_quorum(std::uint64_t shots_per_setting) {
    if (shots_per_setting == 0) {
        throw std::invalid_argument("build_quorum requires at least one shot per setting");
    }
    QuorumPlan plan;

    const auto pair_ensemble = [&](const std::string &name, std::size_t slot_a,
                                   std::size_t slot_b) {
        Ensemble e{name, {}, shots_per_setting};
        for (Pauli p : kAxes) {
            for (Pauli q : kAxes) {
                QuorumSetting s;
                s.id = name + "/" + std::string{pauli_char(p)} + std::string{pauli_char(q)};
                s.measures = {slot_measure(slot_a, p), slot_measure(slot_b, q)};
                e.settings.push_back(std::move(s));
            }
        }
        return e;
    };

    plan.ensembles.push_back(pair_ensemble("temporal_AA", 1, 2));
    plan.ensembles.push_back(pair_ensemble("spatial_BA_t1", 0, 1));
    plan.ensembles.push_back(pair_ensemble("spatial_BA_t2", 0, 2));

    Ensemble threepoint{"threepoint", {}, shots_per_setting};
    for (Pauli p : kAxes) {
        for (Pauli q : kAxes) {
            QuorumSetting s;
            s.id = "threepoint/" + std::string{pauli_char(p)} + std::string{pauli_char(q)};
            // Both A-side measurements share the axis q: only commuting
            // sequential pairs enter the 3-point ensemble.
            s.measures = {slot_measure(0, p), slot_measure(1, q), slot_measure(2, q)};
            threepoint.settings.push_back(std::move(s));
        }
    }
    plan.ensembles.push_back(std::move(threepoint));
    return plan;
}

MeasurementTimeline make_timeline(const std::vector<Measure> &measures, const SourceModel &src) {
    MeasurementTimeline t;
    t.initial_state = werner(src.visibility);
    const bool nontrivial_u =
        src.otc_unitary.max_abs_diff(ComplexMatrix::identity(2)) > 0.0;
    for (const auto &m : measures) {
        if (nontrivial_u && m.carrier == Carrier::A && m.time == "t2") {
            t.events.emplace_back(PrepareUnitary{Carrier::A, src.otc_unitary});
        }
        t.events.emplace_back(m);
    }
    t.validate();
    return t;
}

QuorumData measure_quorum(const QuorumPlan &plan, const SourceModel &src, RunMode mode,
                          std::uint64_t master_seed) {
    QuorumData data;
    std::uint64_t ordinal = 0;
    for (const auto &e : plan.ensembles) {
        for (const auto &s : e.settings) {
            const MeasurementTimeline t = make_timeline(s.measures, src);
            if (mode == RunMode::exact) {
                data.emplace(s.id, exact_distribution(t));
            } else {
                data.emplace(s.id,
                             sample(t, e.shots_per_setting, derive_seed(master_seed, ordinal)));
            }
            ++ordinal;
        }
    }
    return data;
}

std::string to_string(CompletionPolicy p) {
    switch (p) {
        case CompletionPolicy::zero_fill: return "zero_fill";
    }
    throw std::invalid_argument("invalid completion policy");
}

namespace {

Estimate estimate_from_data(const SettingData &data, const std::vector<Measure> &measures,
                            const std::vector<std::size_t> &which) {
    if (const auto *dist = std::get_if<OutcomeDistribution>(&data)) {
        return estimate_correlator(*dist, which);
    }
    const auto &counts = std::get<CountsTable>(data);
    if (counts.setting != measures) {
        throw std::invalid_argument("counts do not match the planned setting");
    }
    return estimate_correlator(counts, which);
}

// Inverse-variance combination of repeated estimates of one coefficient.
// Zero-variance estimates dominate: if any part claims exactness, the
// combination is the mean of the exact parts.
Estimate combine_estimates(const std::vector<Estimate> &parts) {
    if (parts.empty()) {
        throw std::invalid_argument("cannot combine zero estimates");
    }
    bool any_exact = false;
    bool all_unweighted = true;
    for (const auto &p : parts) {
        if (!p.se) {
            any_exact = true;
        } else if (*p.se == 0.0) {
            any_exact = true;
            all_unweighted = false;
        } else {
            all_unweighted = false;
        }
    }
    if (any_exact) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto &p : parts) {
            if (!p.se || *p.se == 0.0) {
                sum += p.value;
                ++n;
            }
        }
        Estimate out{sum / static_cast<double>(n), std::nullopt};
        if (!all_unweighted) {
            out.se = 0.0;
        }
        return out;
    }
    double wsum = 0.0;
    double wvsum = 0.0;
    for (const auto &p : parts) {
        const double w = 1.0 / (*p.se * *p.se);
        wsum += w;
        wvsum += w * p.value;
    }
    return Estimate{wvsum / wsum, std::sqrt(1.0 / wsum)};
}

void require_complete(const QuorumPlan &plan, const QuorumData &data) {
    std::vector<std::string> missing;
    for (const auto &e : plan.ensembles) {
        for (const auto &s : e.settings) {
            if (!data.count(s.id)) {
                missing.push_back(s.id);
            }
        }
    }
    if (!missing.empty()) {
        throw IncompleteQuorumError(std::move(missing));
    }
}

} // namespace

CorrelationTable reconstruct_table(const QuorumPlan &plan, const QuorumData &data) {
    require_complete(plan, data);

    CorrelationTable table;
    table.n_slots = 3;
    table.entries[PauliString(3, Pauli::I)] = Estimate{1.0, std::nullopt};

    // 2-body and 3-body coefficients, each from its dedicated ensemble.
    for (const auto &e : plan.ensembles) {
        for (const auto &s : e.settings) {
            const SettingData &sd = data.at(s.id);
            PauliString str(3, Pauli::I);
            std::vector<std::size_t> which;
            for (std::size_t slot = 0; slot < 3; ++slot) {
                const auto idx = event_index(s.measures, slot);
                if (!idx) {
                    continue;
                }
                const auto p = pauli_from_axis(s.measures[*idx].axis);
                if (!p) {
                    throw std::invalid_argument("quorum settings must use Pauli axes");
                }
                str[slot] = *p;
                which.push_back(*idx);
            }
            table.entries[str] = estimate_from_data(sd, s.measures, which);
        }
    }

    // 1-body coefficients: every setting measuring the event contributes one
    // estimate; combine them inverse-variance-weighted, iterating in plan
    // order so the combination is reproducible.
    for (std::size_t slot = 0; slot < 3; ++slot) {
        for (Pauli p : kAxes) {
            std::vector<Estimate> parts;
            for (const auto &e : plan.ensembles) {
                for (const auto &s : e.settings) {
                    const auto idx = event_index(s.measures, slot);
                    if (!idx || s.measures[*idx].axis != axis_from_pauli(p)) {
                        continue;
                    }
                    parts.push_back(estimate_from_data(data.at(s.id), s.measures, {*idx}));
                }
            }
            PauliString str(3, Pauli::I);
            str[slot] = p;
            table.entries[str] = combine_estimates(parts);
        }
    }

    // Completion: the remaining strings are exactly the 3-body combinations
    // whose A-side axes differ; they are not measurable by commuting
    // sequential settings and are taken as zero.
    for (std::size_t rank = 0; rank < 64; ++rank) {
        PauliString str(3);
        std::size_t r = rank;
        for (std::size_t k = 3; k-- > 0;) {
            str[k] = static_cast<Pauli>(r % 4);
            r /= 4;
        }
        if (table.entries.count(str)) {
            continue;
        }
        if (str[0] == Pauli::I || str[1] == Pauli::I || str[2] == Pauli::I || str[1] == str[2]) {
            throw NumericalError("unexpected gap in reconstructed table: " + to_string(str));
        }
        table.entries[str] = Estimate{0.0, std::nullopt};
    }
    return table;
}

namespace {

// Unit eigenvector of the largest eigenvalue of a pure-state density matrix.
std::vector<cplx> dominant_eigenvector(const ComplexMatrix &m) {
    const EigenDecomposition eig = hermitian_eig(m);
    if (eig.eigenvalues.back() < 1.0 - 1e-6) {
        throw std::invalid_argument("target marginal is not a pure state");
    }
    return eig.eigenvectors.back();
}

} // namespace

ReconstructionReport reconstruct(const QuorumPlan &plan, const QuorumData &data,
                                 const PseudoDensityOperator &target) {
    ReconstructionReport report;
    report.table = reconstruct_table(plan, data);

    report.pdo.events = {EventLabel{"Q1", "t1"}, EventLabel{"Q2", "t1"}, EventLabel{"Q3", "t2"}};
    report.pdo.matrix = assemble(report.table);
    report.pdo.provenance = Provenance::reconstructed;
    report.pdo.validate();

    const CorrelationTable target_table = expand(target.matrix);
    double max_err = 0.0;
    for (const auto &[s, est] : target_table.entries) {
        const auto it = report.table.entries.find(s);
        const double got = (it == report.table.entries.end()) ? 0.0 : it->second.value;
        max_err = std::max(max_err, std::abs(got - est.value));
    }
    report.max_coefficient_error = max_err;

    // Fidelities of the two marginals expected physical (they pair B with one
    // A-side event). The loose positivity tolerance admits shot noise while
    // still rejecting operators with structural negativity.
    Tolerances noisy;
    noisy.psd = 0.1;
    const auto score = [&](const std::set<EventLabel> &keep) {
        const PseudoDensityOperator got = marginal(report.pdo, keep);
        const PseudoDensityOperator want = marginal(target, keep);
        return fidelity_pure(got.matrix, dominant_eigenvector(want.matrix), noisy);
    };
    const EventLabel q1{"Q1", "t1"}, q2{"Q2", "t1"}, q3{"Q3", "t2"};
    report.fidelity_12 = score({q1, q2});
    report.fidelity_13 = score({q1, q3});
    report.completion_policy = CompletionPolicy::zero_fill;
    return report;
}

DisturbanceReport disturbance_demo(double visibility, const Axis &intervening) {
    const SourceModel src{visibility, ComplexMatrix::identity(2)};

    const std::vector<Measure> undisturbed = {slot_measure(0, Pauli::Z),
                                              slot_measure(2, Pauli::Z)};
    const OutcomeDistribution free_dist = exact_distribution(make_timeline(undisturbed, src));

    const std::vector<Measure> disturbed = {slot_measure(0, Pauli::Z),
                                            Measure{Carrier::A, "t1", normalized(intervening)},
                                            slot_measure(2, Pauli::Z)};
    const OutcomeDistribution meas_dist = exact_distribution(make_timeline(disturbed, src));

    DisturbanceReport report;
    report.no_t1_measurement = estimate_correlator(free_dist, {0, 1}).value;
    // Average over the intervening outcome: the correlator uses only the B
    // and A@t2 entries of the 3-outcome tuple.
    report.with_t1_measurement = estimate_correlator(meas_dist, {0, 2}).value;
    return report;
}

} // namespace pdolab
