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

// Test-side oracles, deliberately implemented with different algorithms than
// the library: grid search instead of the closed-form CHSH optimum, power
// iteration instead of Jacobi, Gaussian elimination for eigenvalue
// multiplicities. Agreement between the two is the point of the tests.

#pragma once

#include <cstdint>
#include <vector>

#include "pdolab/linalg.hpp"
#include "pdolab/pauli.hpp"

namespace testsupport {

using pdolab::ComplexMatrix;
using pdolab::cplx;
using pdolab::Matrix3;

// Deterministic scalar streams, independent draws per index.
double uniform01(std::uint64_t seed, std::uint64_t i);
double gaussian(std::uint64_t seed, std::uint64_t i);

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed);

// 3x3 correlation matrix with entries uniform in [-1, 1].
Matrix3 random_t_matrix(std::uint64_t seed);

// Correlation matrix of a random separable two-qubit state: a convex mixture
// of product states, T = sum_k p_k a_k b_k^T with |a_k|, |b_k| <= 1.
Matrix3 random_separable_t(std::uint64_t seed);

// Best CHSH value by scanning the first measurement direction over a
// spherical grid (with local refinement) and solving the orthogonal-plane
// optimum in closed 2x2 form. Accurate to well below 1e-4.
double grid_chsh(const Matrix3 &t, double coarse_step_deg = 2.0);

// Smallest eigenvalue of a Hermitian matrix by power iteration on s*I - m,
// with s a Gershgorin upper bound for the spectrum.
double min_eig_power(const ComplexMatrix &m, std::uint64_t seed = 1234,
                     std::size_t iters = 2000);

// Dimension of the lambda-eigenspace, computed as the nullity of m - lambda*I
// via complex Gaussian elimination with partial pivoting.
std::size_t eigen_multiplicity(const ComplexMatrix &m, double lambda, double tol = 1e-6);

// The two-qubit SWAP gate, built directly as a permutation matrix.
ComplexMatrix swap_gate();

} // namespace testsupport
