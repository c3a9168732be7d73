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

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "pdolab/linalg.hpp"

namespace pdolab {

/// A physical carrier at a tagged time, e.g. carrier "Q2" at time "t1". Two
/// labels with equal carrier and different times are the same system observed
/// at two times.
struct EventLabel {
    std::string carrier;
    std::string time;

    auto operator<=>(const EventLabel &) const = default;
};

std::string to_string(const EventLabel &e);
EventLabel event_from_text(const std::string &text);

enum class Provenance { canonical, reconstructed, marginal };

std::string to_string(Provenance p);
Provenance provenance_from_text(const std::string &text);

/// Hermitian trace-one operator over an ordered list of event slots. Unlike a
/// density matrix it may have negative eigenvalues when its slots are
/// timelike separated.
struct PseudoDensityOperator {
    std::vector<EventLabel> events;
    ComplexMatrix matrix;
    Provenance provenance = Provenance::canonical;

    std::size_t n_slots() const { return events.size(); }

    /// Throws std::invalid_argument unless the matrix is Hermitian and
    /// trace-one within 1e-10 with dimension 2^n_slots.
    void validate() const;
};

/// Spectrum-based positivity diagnostics of a PDO.
struct PhysicalityReport {
    double min_eigenvalue = 0.0;
    std::size_t negative_subspace_dim = 0;
    bool is_physical = false;
};

/// Two-time PDO of a maximally mixed qubit observed at t1 and t2:
/// (1/4)(I + XX + YY + ZZ) on events (Q@t1, Q@t2). Equals SWAP/2; its minimum
/// eigenvalue is -1/2 with the singlet as eigenvector.
PseudoDensityOperator two_time_mixed();

/// Three-event PDO of the open-timelike-curve configuration on events
/// (Q1@t1, Q2@t1, Q3@t2): (1/8)(I - S12 + S23 - S13) where Sij sums XiXj,
/// YiYj, ZiZj. The optional unitary u acts on the time-travelled slot 3 by
/// conjugation (I (x) I (x) u); it must be 2x2 unitary within 1e-10.
PseudoDensityOperator otc_pdo(const ComplexMatrix &u);
PseudoDensityOperator otc_pdo();

/// Partial trace onto the kept events, preserving their original order and
/// labels; provenance becomes marginal.
PseudoDensityOperator marginal(const PseudoDensityOperator &r, const std::set<EventLabel> &keep);

/// Full-spectrum positivity report. Eigenvalues below -tol count as genuinely
/// negative; the default separates PDO negativity (-1/4, -1/2) from numerical
/// noise.
PhysicalityReport physicality(const PseudoDensityOperator &r, double tol = 1e-8);

/// Singlet state (|01> - |10>)/sqrt(2), as vector and projector.
std::vector<cplx> singlet_vector();
ComplexMatrix singlet();

/// Werner mixture v * singlet + (1 - v) * I/4 for v in [0, 1].
ComplexMatrix werner(double v);

/// JSON round-trip in the form {"events":[...], "matrix":{...}, "provenance":...}.
std::string pdo_to_json(const PseudoDensityOperator &r);
PseudoDensityOperator pdo_from_json(const std::string &text);

} // namespace pdolab
