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

#include <complex>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace pdolab {

using cplx = std::complex<double>;

/// Numerical tolerances used across the linear-algebra kernel. Defaults are
/// suitable for the dimensions handled here (at most 8x8); callers may pass
/// adjusted copies where an operation accepts one.
struct Tolerances {
    double hermitian = 1e-10;
    double jacobi_off_diagonal = 1e-12;
    double psd = 1e-8;
};

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cplx trace() const;
    ComplexMatrix adjoint() const;

    ComplexMatrix &operator+=(const ComplexMatrix &o);
    ComplexMatrix &operator-=(const ComplexMatrix &o);
    ComplexMatrix &operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

    /// Exact equality: same shape and entrywise identical values.
    bool operator==(const ComplexMatrix &) const = default;

    /// Largest entrywise |this - o|. Matrices must share dims.
    double max_abs_diff(const ComplexMatrix &o) const;
    double max_abs() const;

    bool is_hermitian(double tol = Tolerances{}.hermitian) const;
    bool is_unitary(double tol = Tolerances{}.hermitian) const;
    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Spectrum of a Hermitian matrix. Eigenvalues ascend; eigenvectors[k] is the
/// unit-norm vector paired with eigenvalues[k].
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    std::vector<std::vector<cplx>> eigenvectors;
};

/// Kronecker product, a's indices outermost.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);

/// Matrix-vector product.
std::vector<cplx> apply(const ComplexMatrix &m, const std::vector<cplx> &v);

/// Outer product |v><v|.
ComplexMatrix projector(const std::vector<cplx> &v);

/// Trace out every slot not in `keep`; kept slots stay in original order.
/// `slot_dims` lists per-slot dimensions whose product must equal the matrix
/// dimension. Slot indices are zero-based.
ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<std::size_t> &slot_dims,
                            const std::set<std::size_t> &keep);

/// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws std::invalid_argument when m is not Hermitian within tol.hermitian;
/// iterates until the largest off-diagonal magnitude drops below
/// tol.jacobi_off_diagonal.
EigenDecomposition hermitian_eig(const ComplexMatrix &m, const Tolerances &tol = {});

/// Pure-target fidelity <psi|rho|psi>. rho must be a density operator: trace
/// one and eigenvalues >= -tol.psd (throws NotADensityOperatorError below
/// that); psi must be unit norm.
double fidelity_pure(const ComplexMatrix &rho, const std::vector<cplx> &psi,
                     const Tolerances &tol = {});

/// JSON round-trip in the form {"dims":[r,c],"re":[[..]],"im":[[..]]}.
std::string matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const std::string &text);

} // namespace pdolab
