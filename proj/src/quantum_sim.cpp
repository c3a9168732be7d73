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

#include "pdolab/quantum_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pdolab/errors.hpp"
#include "pdolab/rng.hpp"

namespace pdolab {

std::string to_string(Carrier c) { return c == Carrier::B ? "B" : "A"; }

Axis axis_x() { return {1.0, 0.0, 0.0}; }
Axis axis_y() { return {0.0, 1.0, 0.0}; }
Axis axis_z() { return {0.0, 0.0, 1.0}; }

Axis axis_from_pauli(Pauli p) {
    switch (p) {
        case Pauli::X: return axis_x();
        case Pauli::Y: return axis_y();
        case Pauli::Z: return axis_z();
        case Pauli::I: break;
    }
    throw std::invalid_argument("measurement axis must be X, Y or Z");
}

double dot(const Axis &a, const Axis &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Axis normalized(const Axis &a) {
    const double n = std::sqrt(dot(a, a));
    if (n < 1e-12) {
        throw std::invalid_argument("cannot normalize a near-zero axis");
    }
    return {a[0] / n, a[1] / n, a[2] / n};
}

ComplexMatrix axis_operator(const Axis &a) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a[2];
    m(1, 1) = -a[2];
    m(0, 1) = cplx{a[0], -a[1]};
    m(1, 0) = cplx{a[0], a[1]};
    return m;
}

Matrix3 rotation_of_unitary(const ComplexMatrix &u) {
    if (u.rows() != 2 || u.cols() != 2 || !u.is_unitary(1e-10)) {
        throw std::invalid_argument("rotation_of_unitary requires a 2x2 unitary");
    }
    static const Pauli kAxes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    const ComplexMatrix ud = u.adjoint();
    Matrix3 rot{};
    for (int a = 0; a < 3; ++a) {
        const ComplexMatrix sa = pauli_matrix(kAxes[a]);
        for (int b = 0; b < 3; ++b) {
            rot[a][b] = 0.5 * (sa * u * pauli_matrix(kAxes[b]) * ud).trace().real();
        }
    }
    return rot;
}

Axis rotate_axis(const Matrix3 &rot, const Axis &a) {
    Axis out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = rot[i][0] * a[0] + rot[i][1] * a[1] + rot[i][2] * a[2];
    }
    return out;
}

namespace {

std::string format_axis_component(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace

std::string axis_label(const Axis &a) {
    if (a == axis_x()) {
        return "X";
    }
    if (a == axis_y()) {
        return "Y";
    }
    if (a == axis_z()) {
        return "Z";
    }
    return "[" + format_axis_component(a[0]) + "," + format_axis_component(a[1]) + "," +
           format_axis_component(a[2]) + "]";
}

Axis axis_from_label(const std::string &text) {
    if (text == "X") {
        return axis_x();
    }
    if (text == "Y") {
        return axis_y();
    }
    if (text == "Z") {
        return axis_z();
    }
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw std::invalid_argument("axis label must be X, Y, Z or [x,y,z]: " + text);
    }
    Axis a{};
    std::size_t pos = 1;
    for (int k = 0; k < 3; ++k) {
        const std::size_t end = (k < 2) ? text.find(',', pos) : text.size() - 1;
        if (end == std::string::npos) {
            throw std::invalid_argument("malformed axis label: " + text);
        }
        const auto res = std::from_chars(text.data() + pos, text.data() + end, a[k]);
        if (res.ec != std::errc{} || res.ptr != text.data() + end) {
            throw std::invalid_argument("malformed axis component in: " + text);
        }
        pos = end + 1;
    }
    return a;
}

std::string to_string(const Measure &m) {
    return to_string(m.carrier) + "@" + m.time + ":" + axis_label(m.axis);
}

std::vector<Measure> MeasurementTimeline::measures() const {
    std::vector<Measure> out;
    for (const auto &e : events) {
        if (const auto *m = std::get_if<Measure>(&e)) {
            out.push_back(*m);
        }
    }
    return out;
}

void MeasurementTimeline::validate() const {
    if (initial_state.rows() != 4 || initial_state.cols() != 4) {
        throw std::invalid_argument("timeline state must be a 4x4 two-carrier matrix");
    }
    if (!initial_state.is_hermitian(1e-10)) {
        throw std::invalid_argument("timeline state must be Hermitian");
    }
    if (std::abs(initial_state.trace() - cplx{1.0, 0.0}) > 1e-10) {
        throw std::invalid_argument("timeline state must have unit trace");
    }
    const EigenDecomposition eig = hermitian_eig(initial_state);
    if (eig.eigenvalues.front() < -1e-8) {
        throw std::invalid_argument("timeline state must be positive semidefinite");
    }

    std::map<Carrier, std::string> last_time;
    std::set<std::pair<Carrier, std::string>> seen;
    for (const auto &e : events) {
        if (const auto *p = std::get_if<PrepareUnitary>(&e)) {
            if (p->u.rows() != 2 || p->u.cols() != 2 || !p->u.is_unitary(1e-10)) {
                throw std::invalid_argument("timeline unitary must be 2x2 unitary");
            }
            continue;
        }
        const auto &m = std::get<Measure>(e);
        if (std::abs(dot(m.axis, m.axis) - 1.0) > 2e-10) {
            throw std::invalid_argument("measurement axis must be unit norm");
        }
        if (!seen.insert({m.carrier, m.time}).second) {
            throw std::invalid_argument("duplicate measurement on " + to_string(m));
        }
        const auto it = last_time.find(m.carrier);
        if (it != last_time.end() && m.time <= it->second) {
            throw std::invalid_argument("time tags must strictly increase per carrier");
        }
        last_time[m.carrier] = m.time;
    }
}

std::string outcome_tuple_to_string(const OutcomeTuple &o) {
    std::string s;
    s.reserve(o.size());
    for (int v : o) {
        s.push_back(v > 0 ? '+' : '-');
    }
    return s;
}

OutcomeTuple outcome_tuple_from_string(const std::string &text) {
    OutcomeTuple o;
    o.reserve(text.size());
    for (char c : text) {
        if (c == '+') {
            o.push_back(+1);
        } else if (c == '-') {
            o.push_back(-1);
        } else {
            throw std::invalid_argument("outcome tuple must use + and - only: " + text);
        }
    }
    return o;
}

namespace {

// Lift a 2x2 operator to the 4x4 joint space of B (slot 0) and A (slot 1).
ComplexMatrix lift(const ComplexMatrix &m, Carrier c) {
    return c == Carrier::B ? tensor(m, ComplexMatrix::identity(2))
                           : tensor(ComplexMatrix::identity(2), m);
}

ComplexMatrix axis_projector(const Axis &a, int sign) {
    ComplexMatrix m = axis_operator(a);
    m *= cplx{0.5 * sign, 0.0};
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    m += half;
    return m;
}

} // namespace

OutcomeDistribution exact_distribution(const MeasurementTimeline &t) {
    t.validate();

    struct Branch {
        OutcomeTuple outcome;
        ComplexMatrix state;
    };
    std::vector<Branch> branches{{OutcomeTuple{}, t.initial_state}};

    for (const auto &e : t.events) {
        if (const auto *p = std::get_if<PrepareUnitary>(&e)) {
            const ComplexMatrix u = lift(p->u, p->carrier);
            const ComplexMatrix ud = u.adjoint();
            for (auto &b : branches) {
                b.state = u * b.state * ud;
            }
            continue;
        }
        const auto &m = std::get<Measure>(e);
        const ComplexMatrix proj_plus = lift(axis_projector(m.axis, +1), m.carrier);
        const ComplexMatrix proj_minus = lift(axis_projector(m.axis, -1), m.carrier);
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (const auto &b : branches) {
            Branch plus{b.outcome, proj_plus * b.state * proj_plus};
            plus.outcome.push_back(+1);
            Branch minus{b.outcome, proj_minus * b.state * proj_minus};
            minus.outcome.push_back(-1);
            next.push_back(std::move(plus));
            next.push_back(std::move(minus));
        }
        branches = std::move(next);
    }

    OutcomeDistribution dist;
    double total = 0.0;
    for (const auto &b : branches) {
        const cplx tr = b.state.trace();
        if (std::abs(tr.imag()) > 1e-10 || tr.real() < -1e-12) {
            throw NumericalError("branch probability out of range");
        }
        const double p = std::max(tr.real(), 0.0);
        dist.outcomes[b.outcome] = p;
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw NumericalError("outcome probabilities do not sum to 1");
    }
    return dist;
}

namespace {

std::size_t pick_outcome(const std::vector<double> &cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        return cumulative.size() - 1;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

CountsTable assemble_counts(const MeasurementTimeline &t, const std::vector<OutcomeTuple> &outs,
                            const std::vector<std::uint64_t> &totals, std::uint64_t shots) {
    CountsTable table;
    table.setting = t.measures();
    table.shots = shots;
    for (std::size_t k = 0; k < outs.size(); ++k) {
        table.counts[outs[k]] = totals[k];
    }
    return table;
}

// Shared setup for both sampling paths: support outcomes and their
// cumulative probabilities, zero-probability outcomes excluded.
void sampling_support(const OutcomeDistribution &dist, std::vector<OutcomeTuple> &outs,
                      std::vector<double> &cumulative) {
    double acc = 0.0;
    for (const auto &[o, p] : dist.outcomes) {
        if (p <= 0.0) {
            continue;
        }
        acc += p;
        outs.push_back(o);
        cumulative.push_back(acc);
    }
    if (outs.empty()) {
        throw NumericalError("sampling distribution has empty support");
    }
}

} // namespace

CountsTable sample(const MeasurementTimeline &t, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample requires at least one shot");
    }
    const OutcomeDistribution dist = exact_distribution(t);
    std::vector<OutcomeTuple> outs;
    std::vector<double> cumulative;
    sampling_support(dist, outs, cumulative);

    std::vector<std::uint64_t> totals(outs.size(), 0);
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(outs.size(), 0);
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(shots); ++i) {
            ++local[pick_outcome(cumulative, uniform_at(seed, static_cast<std::uint64_t>(i)))];
        }
#pragma omp critical
        {
            for (std::size_t k = 0; k < totals.size(); ++k) {
                totals[k] += local[k];
            }
        }
    }
#else
    for (std::uint64_t i = 0; i < shots; ++i) {
        ++totals[pick_outcome(cumulative, uniform_at(seed, i))];
    }
#endif
    return assemble_counts(t, outs, totals, shots);
}

CountsTable sample_serial(const MeasurementTimeline &t, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample requires at least one shot");
    }
    const OutcomeDistribution dist = exact_distribution(t);
    std::vector<OutcomeTuple> outs;
    std::vector<double> cumulative;
    sampling_support(dist, outs, cumulative);

    std::vector<std::uint64_t> totals(outs.size(), 0);
    for (std::uint64_t i = 0; i < shots; ++i) {
        ++totals[pick_outcome(cumulative, uniform_at(seed, i))];
    }
    return assemble_counts(t, outs, totals, shots);
}

namespace {

int outcome_product(const OutcomeTuple &o, const std::vector<std::size_t> &which) {
    int prod = 1;
    for (std::size_t k : which) {
        prod *= o[k];
    }
    return prod;
}

void validate_which(const std::vector<std::size_t> &which, std::size_t tuple_size) {
    if (which.empty()) {
        throw std::invalid_argument("correlator requires at least one measure event");
    }
    for (std::size_t k : which) {
        if (k >= tuple_size) {
            throw std::invalid_argument("correlator event index out of range");
        }
    }
}

} // namespace

Estimate estimate_correlator(const CountsTable &c, const std::vector<std::size_t> &which) {
    if (c.counts.empty() || c.shots == 0) {
        throw std::invalid_argument("correlator requires nonempty counts");
    }
    validate_which(which, c.setting.size());

    double sum = 0.0;
    for (const auto &[o, n] : c.counts) {
        sum += static_cast<double>(n) * outcome_product(o, which);
    }
    const double value = sum / static_cast<double>(c.shots);

    double ss = 0.0;
    for (const auto &[o, n] : c.counts) {
        const double d = outcome_product(o, which) - value;
        ss += static_cast<double>(n) * d * d;
    }
    Estimate est;
    est.value = value;
    est.se = (c.shots > 1)
                 ? std::sqrt(ss / static_cast<double>(c.shots - 1) / static_cast<double>(c.shots))
                 : 0.0;
    return est;
}

Estimate estimate_correlator(const OutcomeDistribution &d, const std::vector<std::size_t> &which) {
    if (d.outcomes.empty()) {
        throw std::invalid_argument("correlator requires a nonempty distribution");
    }
    validate_which(which, d.outcomes.begin()->first.size());

    double value = 0.0;
    for (const auto &[o, p] : d.outcomes) {
        value += p * outcome_product(o, which);
    }
    return Estimate{value, std::nullopt};
}

std::string counts_to_csv(const std::map<std::string, CountsTable> &tables) {
    std::string out = "setting,outcome_tuple,count\n";
    for (const auto &[id, table] : tables) {
        for (const auto &[o, n] : table.counts) {
            out += id;
            out += ',';
            out += outcome_tuple_to_string(o);
            out += ',';
            out += std::to_string(n);
            out += '\n';
        }
    }
    return out;
}

} // namespace pdolab
