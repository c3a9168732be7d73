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

#include "pdolab/pdo.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "pdolab/pauli.hpp"

namespace pdolab {

std::string to_string(const EventLabel &e) { return e.carrier + "@" + e.time; }

EventLabel event_from_text(const std::string &text) {
    const std::size_t at = text.find('@');
    if (at == std::string::npos || at == 0 || at + 1 == text.size()) {
        throw std::invalid_argument("event label must look like carrier@time: " + text);
    }
    return EventLabel{text.substr(0, at), text.substr(at + 1)};
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::canonical: return "canonical";
        case Provenance::reconstructed: return "reconstructed";
        case Provenance::marginal: return "marginal";
    }
    throw std::invalid_argument("invalid provenance");
}

Provenance provenance_from_text(const std::string &text) {
    if (text == "canonical") {
        return Provenance::canonical;
    }
    if (text == "reconstructed") {
        return Provenance::reconstructed;
    }
    if (text == "marginal") {
        return Provenance::marginal;
    }
    throw std::invalid_argument("invalid provenance: " + text);
}

void PseudoDensityOperator::validate() const {
    if (events.empty()) {
        throw std::invalid_argument("PDO requires at least one event");
    }
    std::size_t dim = 1;
    for (std::size_t k = 0; k < events.size(); ++k) {
        dim *= 2;
    }
    if (!matrix.is_square() || matrix.rows() != dim) {
        throw std::invalid_argument("PDO matrix dimension does not match event count");
    }
    if (!matrix.is_hermitian(1e-10)) {
        throw std::invalid_argument("PDO matrix is not Hermitian");
    }
    if (std::abs(matrix.trace() - cplx{1.0, 0.0}) > 1e-10) {
        throw std::invalid_argument("PDO matrix does not have unit trace");
    }
}

namespace {

// Sum of XiXj + YiYj + ZiZj over the axis label at slots i and j of an
// n-slot identity string.
ComplexMatrix sigma_sum(std::size_t n, std::size_t i, std::size_t j) {
    static constexpr Pauli kAxes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n; ++k) {
        dim *= 2;
    }
    ComplexMatrix sum(dim, dim);
    for (Pauli axis : kAxes) {
        PauliString s(n, Pauli::I);
        s[i] = axis;
        s[j] = axis;
        sum += pauli_matrix(s);
    }
    return sum;
}

} // namespace

PseudoDensityOperator two_time_mixed() {
    ComplexMatrix m = ComplexMatrix::identity(4) + sigma_sum(2, 0, 1);
    m *= cplx{0.25, 0.0};
    PseudoDensityOperator r{{EventLabel{"Q", "t1"}, EventLabel{"Q", "t2"}}, std::move(m),
                            Provenance::canonical};
    r.validate();
    return r;
}

PseudoDensityOperator otc_pdo(const ComplexMatrix &u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw std::invalid_argument("otc unitary must be 2x2");
    }
    if (!u.is_unitary(1e-10)) {
        throw std::invalid_argument("otc unitary is not unitary");
    }
    ComplexMatrix m = ComplexMatrix::identity(8) - sigma_sum(3, 0, 1) + sigma_sum(3, 1, 2) -
                      sigma_sum(3, 0, 2);
    m *= cplx{0.125, 0.0};
    const ComplexMatrix lift = tensor(ComplexMatrix::identity(4), u);
    m = lift * m * lift.adjoint();
    PseudoDensityOperator r{
        {EventLabel{"Q1", "t1"}, EventLabel{"Q2", "t1"}, EventLabel{"Q3", "t2"}}, std::move(m),
        Provenance::canonical};
    r.validate();
    return r;
}

PseudoDensityOperator otc_pdo() { return otc_pdo(ComplexMatrix::identity(2)); }

PseudoDensityOperator marginal(const PseudoDensityOperator &r, const std::set<EventLabel> &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("marginal requires a nonempty set of kept events");
    }
    std::set<std::size_t> keep_slots;
    std::vector<EventLabel> kept_events;
    for (std::size_t k = 0; k < r.events.size(); ++k) {
        if (keep.count(r.events[k])) {
            keep_slots.insert(k);
            kept_events.push_back(r.events[k]);
        }
    }
    if (keep_slots.size() != keep.size()) {
        throw std::invalid_argument("marginal kept events must be a subset of the PDO events");
    }
    const std::vector<std::size_t> dims(r.events.size(), 2);
    PseudoDensityOperator out{std::move(kept_events), partial_trace(r.matrix, dims, keep_slots),
                              Provenance::marginal};
    out.validate();
    return out;
}

PhysicalityReport physicality(const PseudoDensityOperator &r, double tol) {
    const EigenDecomposition eig = hermitian_eig(r.matrix);
    PhysicalityReport report;
    report.min_eigenvalue = eig.eigenvalues.front();
    for (double lambda : eig.eigenvalues) {
        if (lambda < -tol) {
            ++report.negative_subspace_dim;
        }
    }
    report.is_physical = report.min_eigenvalue >= -tol;
    return report;
}

std::vector<cplx> singlet_vector() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx{0.0, 0.0}, cplx{s, 0.0}, cplx{-s, 0.0}, cplx{0.0, 0.0}};
}

ComplexMatrix singlet() { return projector(singlet_vector()); }

ComplexMatrix werner(double v) {
    if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("werner visibility must lie in [0, 1]");
    }
    ComplexMatrix m = singlet();
    m *= cplx{v, 0.0};
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= cplx{(1.0 - v) * 0.25, 0.0};
    m += mixed;
    return m;
}

std::string pdo_to_json(const PseudoDensityOperator &r) {
    nlohmann::json j;
    nlohmann::json events = nlohmann::json::array();
    for (const auto &e : r.events) {
        events.push_back(to_string(e));
    }
    j["events"] = std::move(events);
    j["matrix"] = nlohmann::json::parse(matrix_to_json(r.matrix));
    j["provenance"] = to_string(r.provenance);
    return j.dump();
}

PseudoDensityOperator pdo_from_json(const std::string &text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    PseudoDensityOperator r;
    for (const auto &e : j.at("events")) {
        r.events.push_back(event_from_text(e.get<std::string>()));
    }
    r.matrix = matrix_from_json(j.at("matrix").dump());
    r.provenance = provenance_from_text(j.at("provenance").get<std::string>());
    r.validate();
    return r;
}

} // namespace pdolab
