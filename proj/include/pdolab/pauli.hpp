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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdolab/linalg.hpp"

namespace pdolab {

enum class Pauli { I, X, Y, Z };

/// One single-qubit label per event slot, e.g. (X, X, I).
using PauliString = std::vector<Pauli>;

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// A real expectation value with an optional standard error. Exact
/// (zero-variance) estimates carry no standard error.
struct Estimate {
    double value = 0.0;
    std::optional<double> se;
};

/// Pauli coefficients of an n-slot Hermitian operator. Entries store raw
/// expectations <s> in [-1, 1]; the 1/2^n assembly prefactor is applied by
/// assemble(). Strings absent from the map are treated as exact zeros.
struct CorrelationTable {
    std::map<PauliString, Estimate> entries;
    std::size_t n_slots = 0;
};

char pauli_char(Pauli p);
std::string to_string(const PauliString &s);
PauliString pauli_string_from_text(const std::string &text);

/// 2x2 matrix of a single label.
ComplexMatrix pauli_matrix(Pauli p);

/// Tensor product of single-qubit matrices in slot order; dimension 2^n.
ComplexMatrix pauli_matrix(const PauliString &s);

/// Full coefficient table of a Hermitian matrix: value(s) = Tr(m * P_s),
/// one entry per string including exact zeros. Dimension must be a power of
/// two; coefficients must come out real within 1e-10.
CorrelationTable expand(const ComplexMatrix &m);

/// (1/2^n) * sum over entries of value * P_s. Requires the all-I entry with
/// value 1; missing strings contribute zero.
ComplexMatrix assemble(const CorrelationTable &t);

/// Two-point correlation block between two slots: T[a][b] is the entry with
/// Pauli a at slot_a, b at slot_b (a, b over X, Y, Z) and I elsewhere.
/// Missing entries read as 0.
Matrix3 correlation_3x3(const CorrelationTable &t, std::size_t slot_a, std::size_t slot_b);

/// CSV round-trip with header string,value,stderr; the stderr field is empty
/// for exact estimates. Values use shortest round-trip formatting.
std::string table_to_csv(const CorrelationTable &t);
CorrelationTable table_from_csv(const std::string &text);

} // namespace pdolab
