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
#include <set>

#include <doctest.h>

#include "pdolab/linalg.hpp"
#include "pdolab/pauli.hpp"
#include "pdolab/pdo.hpp"
#include "test_support.hpp"

using namespace pdolab;
using testsupport::eigen_multiplicity;
using testsupport::min_eig_power;

namespace {

// 1/4 (I + sign * (XX + YY + ZZ)) on two qubits.
ComplexMatrix quarter_identity_plus(double sign) {
    ComplexMatrix m = ComplexMatrix::identity(4);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        ComplexMatrix pp = pauli_matrix(PauliString{p, p});
        pp *= sign;
        m += pp;
    }
    m *= 0.25;
    return m;
}

} // namespace

TEST_CASE("event labels format and compare") {
    const EventLabel e{"Q2", "t1"};
    CHECK(to_string(e) == "Q2@t1");
    CHECK(event_from_text("Q2@t1") == e);
    CHECK_THROWS(event_from_text("Q2t1"));
    const EventLabel first{"Q1", "t1"}, second{"Q2", "t1"};
    CHECK(first < second);
}

TEST_CASE("two-time operator: spectrum and singlet eigenvector") {
    const PseudoDensityOperator r = two_time_mixed();
    REQUIRE(r.n_slots() == 2);
    const EventLabel t1{"Q", "t1"}, t2{"Q", "t2"};
    CHECK(r.events[0] == t1);
    CHECK(r.events[1] == t2);
    CHECK(r.matrix.is_hermitian(1e-12));
    CHECK(std::abs(r.matrix.trace() - 1.0) < 1e-12);

    // Equal to half the SWAP gate, entry for entry.
    ComplexMatrix half_swap = testsupport::swap_gate();
    half_swap *= 0.5;
    CHECK(r.matrix.max_abs_diff(half_swap) < 1e-15);

    const EigenDecomposition eig = hermitian_eig(r.matrix);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) {
        CHECK(eig.eigenvalues[k] == doctest::Approx(0.5).epsilon(1e-12));
    }

    // The negative eigenvector is the singlet, up to phase.
    const std::vector<cplx> psi = singlet_vector();
    cplx overlap{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        overlap += std::conj(psi[i]) * eig.eigenvectors[0][i];
    }
    CHECK(std::norm(overlap) >= 1.0 - 1e-10);
}

TEST_CASE("three-event operator: coefficients, marginals, spectrum") {
    const PseudoDensityOperator r = otc_pdo();
    REQUIRE(r.n_slots() == 3);
    CHECK(r.provenance == Provenance::canonical);
    CHECK(r.matrix.is_hermitian(1e-12));
    CHECK(std::abs(r.matrix.trace() - 1.0) < 1e-12);

    // Exactly 10 nonzero Pauli coefficients, with the signature sign pattern:
    // -1 on equal-Pauli pairs (1,2) and (1,3), +1 on pair (2,3).
    const CorrelationTable t = expand(r.matrix);
    for (const auto &[s, est] : t.entries) {
        double expect = 0.0;
        if (s == pauli_string_from_text("III")) {
            expect = 1.0;
        } else if (s[0] == s[1] && s[2] == Pauli::I && s[0] != Pauli::I) {
            expect = -1.0;
        } else if (s[0] == s[2] && s[1] == Pauli::I && s[0] != Pauli::I) {
            expect = -1.0;
        } else if (s[1] == s[2] && s[0] == Pauli::I && s[1] != Pauli::I) {
            expect = 1.0;
        }
        CHECK(est.value == doctest::Approx(expect).epsilon(1e-12));
    }

    // Marginals in closed form: slots (1,2) and (1,3) are the singlet state,
    // slots (2,3) are the two-time operator.
    const EventLabel q1{"Q1", "t1"}, q2{"Q2", "t1"}, q3{"Q3", "t2"};
    CHECK(marginal(r, {q1, q2}).matrix.max_abs_diff(quarter_identity_plus(-1.0)) < 1e-12);
    CHECK(marginal(r, {q1, q3}).matrix.max_abs_diff(quarter_identity_plus(-1.0)) < 1e-12);
    CHECK(marginal(r, {q2, q3}).matrix.max_abs_diff(quarter_identity_plus(1.0)) < 1e-12);
    CHECK(marginal(r, {q1, q2}).matrix.max_abs_diff(singlet()) < 1e-12);
    CHECK(marginal(r, {q2, q3}).matrix.max_abs_diff(two_time_mixed().matrix) < 1e-12);
    CHECK(marginal(r, {q1, q2}).provenance == Provenance::marginal);

    // Spectrum {-1/4 x2, 0 x4, 3/4 x2}, checked against independent oracles.
    const EigenDecomposition eig = hermitian_eig(r.matrix);
    const double expected[8] = {-0.25, -0.25, 0.0, 0.0, 0.0, 0.0, 0.75, 0.75};
    for (int k = 0; k < 8; ++k) {
        CHECK(eig.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-10));
    }
    CHECK(min_eig_power(r.matrix) == doctest::Approx(-0.25).epsilon(1e-8));
    CHECK(eigen_multiplicity(r.matrix, -0.25) == 2);
    CHECK(eigen_multiplicity(r.matrix, 0.0) == 4);
    CHECK(eigen_multiplicity(r.matrix, 0.75) == 2);
}

TEST_CASE("unitary insertion acts on the third slot only") {
    const ComplexMatrix x = pauli_matrix(Pauli::X);
    const PseudoDensityOperator rx = otc_pdo(x);
    CHECK(rx.matrix.is_hermitian(1e-12));
    CHECK(std::abs(rx.matrix.trace() - 1.0) < 1e-12);

    // Conjugating the canonical operator on slot 3 reproduces it.
    const ComplexMatrix lift = tensor(ComplexMatrix::identity(4), x);
    const ComplexMatrix expect = lift * otc_pdo().matrix * lift.adjoint();
    CHECK(rx.matrix.max_abs_diff(expect) < 1e-12);

    // The (1,2) marginal is untouched; the (2,3) marginal is conjugated.
    const EventLabel q1{"Q1", "t1"}, q2{"Q2", "t1"}, q3{"Q3", "t2"};
    CHECK(marginal(rx, {q1, q2}).matrix.max_abs_diff(singlet()) < 1e-12);
    const ComplexMatrix lift2 = tensor(ComplexMatrix::identity(2), x);
    const ComplexMatrix expect23 = lift2 * two_time_mixed().matrix * lift2.adjoint();
    CHECK(marginal(rx, {q2, q3}).matrix.max_abs_diff(expect23) < 1e-12);

    // Same eigenvalues as the canonical operator.
    const EigenDecomposition eig = hermitian_eig(rx.matrix);
    CHECK(eig.eigenvalues.front() == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(eig.eigenvalues.back() == doctest::Approx(0.75).epsilon(1e-10));

    CHECK_THROWS_AS(otc_pdo(ComplexMatrix::identity(3)), std::invalid_argument);
    ComplexMatrix not_unitary(2, 2);
    not_unitary(0, 0) = 2.0;
    CHECK_THROWS_AS(otc_pdo(not_unitary), std::invalid_argument);
}

TEST_CASE("marginal validates the requested event subset") {
    const PseudoDensityOperator r = otc_pdo();
    CHECK_THROWS_AS(marginal(r, {EventLabel{"Q9", "t1"}}), std::invalid_argument);
    CHECK_THROWS_AS(marginal(r, std::set<EventLabel>{}), std::invalid_argument);

    // Single-slot marginal is maximally mixed.
    const PseudoDensityOperator r1 = marginal(r, {EventLabel{"Q1", "t1"}});
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= 0.5;
    CHECK(r1.matrix.max_abs_diff(half) < 1e-12);
}

TEST_CASE("physicality classifies states and pseudo-states") {
    const PhysicalityReport canonical = physicality(otc_pdo());
    CHECK(!canonical.is_physical);
    CHECK(canonical.min_eigenvalue == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(canonical.negative_subspace_dim == 2);

    PseudoDensityOperator w;
    w.events = {EventLabel{"Q1", "t1"}, EventLabel{"Q2", "t1"}};
    w.matrix = werner(0.7);
    w.provenance = Provenance::canonical;
    const PhysicalityReport wr = physicality(w);
    CHECK(wr.is_physical);
    CHECK(wr.negative_subspace_dim == 0);
    CHECK(wr.min_eigenvalue == doctest::Approx(0.075).epsilon(1e-10));
}

TEST_CASE("werner family interpolates mixed to singlet") {
    CHECK(werner(1.0).max_abs_diff(singlet()) < 1e-15);
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= 0.25;
    CHECK(werner(0.0).max_abs_diff(mixed) < 1e-15);
    CHECK_THROWS_AS(werner(1.5), std::invalid_argument);
    CHECK_THROWS_AS(werner(-0.1), std::invalid_argument);
}

TEST_CASE("pdo JSON round-trips") {
    const PseudoDensityOperator r = otc_pdo(pauli_matrix(Pauli::Y));
    const PseudoDensityOperator back = pdo_from_json(pdo_to_json(r));
    CHECK(back.events == r.events);
    CHECK(back.provenance == r.provenance);
    CHECK(back.matrix == r.matrix);
}

TEST_CASE("validate rejects malformed operators") {
    PseudoDensityOperator bad;
    bad.events = {EventLabel{"Q", "t1"}};
    bad.matrix = ComplexMatrix::identity(2); // trace 2
    bad.provenance = Provenance::canonical;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.matrix = ComplexMatrix(2, 2);
    bad.matrix(0, 0) = 1.0;
    bad.matrix(0, 1) = cplx{0.0, 0.5}; // not Hermitian
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.matrix = ComplexMatrix::identity(4); // wrong dimension for one slot
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
