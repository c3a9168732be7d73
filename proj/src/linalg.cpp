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

#include "pdolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "pdolab/errors.hpp"

namespace pdolab {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix dimensions must be at least 1x1");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) {
        throw std::invalid_argument("trace requires a square matrix");
    }
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("matrix shape mismatch in addition");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("matrix shape mismatch in subtraction");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
    for (auto &x : data_) {
        x *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("matrix shape mismatch in product");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols_; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("matrix shape mismatch in comparison");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        m = std::max(m, std::abs(data_[i] - o.data_[i]));
    }
    return m;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto &x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (!is_square()) {
        return false;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = r; c < cols_; ++c) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    if (!is_square()) {
        return false;
    }
    const ComplexMatrix prod = adjoint() * (*this);
    return prod.max_abs_diff(identity(rows_)) <= tol;
}

bool ComplexMatrix::all_finite() const {
    for (const auto &x : data_) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            return false;
        }
    }
    return true;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx v = a(ar, ac);
            if (v == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
                }
            }
        }
    }
    return out;
}

std::vector<cplx> apply(const ComplexMatrix &m, const std::vector<cplx> &v) {
    if (m.cols() != v.size()) {
        throw std::invalid_argument("matrix-vector shape mismatch");
    }
    std::vector<cplx> out(m.rows(), cplx{0.0, 0.0});
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

ComplexMatrix projector(const std::vector<cplx> &v) {
    if (v.empty()) {
        throw std::invalid_argument("projector requires a nonempty vector");
    }
    ComplexMatrix out(v.size(), v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        for (std::size_t c = 0; c < v.size(); ++c) {
            out(r, c) = v[r] * std::conj(v[c]);
        }
    }
    return out;
}

namespace {

// Mixed-radix decomposition of a flat index into per-slot digits.
void decompose(std::size_t index, const std::vector<std::size_t> &dims,
               std::vector<std::size_t> &digits) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

std::size_t compose(const std::vector<std::size_t> &digits, const std::vector<std::size_t> &dims) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        index = index * dims[k] + digits[k];
    }
    return index;
}

} // namespace

ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<std::size_t> &slot_dims,
                            const std::set<std::size_t> &keep) {
    if (!m.is_square()) {
        throw std::invalid_argument("partial_trace requires a square matrix");
    }
    std::size_t total = 1;
    for (std::size_t d : slot_dims) {
        if (d == 0) {
            throw std::invalid_argument("slot dimensions must be positive");
        }
        total *= d;
    }
    if (total != m.rows()) {
        throw std::invalid_argument("slot dimensions do not multiply to the matrix dimension");
    }
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace must keep at least one slot");
    }
    for (std::size_t k : keep) {
        if (k >= slot_dims.size()) {
            throw std::invalid_argument("kept slot index out of range");
        }
    }

    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < slot_dims.size(); ++k) {
        if (!keep.count(k)) {
            traced.push_back(k);
        }
    }

    std::size_t kept_dim = 1;
    for (std::size_t k : kept) {
        kept_dim *= slot_dims[k];
    }
    std::size_t traced_dim = 1;
    for (std::size_t k : traced) {
        traced_dim *= slot_dims[k];
    }

    std::vector<std::size_t> kept_dims(kept.size()), traced_dims(traced.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        kept_dims[i] = slot_dims[kept[i]];
    }
    for (std::size_t i = 0; i < traced.size(); ++i) {
        traced_dims[i] = slot_dims[traced[i]];
    }

    ComplexMatrix out(kept_dim, kept_dim);
    std::vector<std::size_t> row_digits(slot_dims.size()), col_digits(slot_dims.size());
    std::vector<std::size_t> kd_row(kept.size()), kd_col(kept.size()), td(traced.size());
    for (std::size_t r = 0; r < kept_dim; ++r) {
        decompose(r, kept_dims, kd_row);
        for (std::size_t c = 0; c < kept_dim; ++c) {
            decompose(c, kept_dims, kd_col);
            cplx sum{0.0, 0.0};
            for (std::size_t e = 0; e < traced_dim; ++e) {
                decompose(e, traced_dims, td);
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    row_digits[kept[i]] = kd_row[i];
                    col_digits[kept[i]] = kd_col[i];
                }
                for (std::size_t i = 0; i < traced.size(); ++i) {
                    row_digits[traced[i]] = td[i];
                    col_digits[traced[i]] = td[i];
                }
                sum += m(compose(row_digits, slot_dims), compose(col_digits, slot_dims));
            }
            out(r, c) = sum;
        }
    }
    return out;
}

namespace {

// One two-sided Jacobi rotation zeroing a(p,q), with the rotation accumulated
// into v. The rotation columns are the exact eigenvectors of the 2x2
// Hermitian block, so the block lands on its eigenvalues directly.
void jacobi_rotate(ComplexMatrix &a, ComplexMatrix &v, std::size_t p, std::size_t q) {
    const cplx beta = a(p, q);
    const double alpha = a(p, p).real();
    const double gamma = a(q, q).real();
    const double d = 0.5 * (alpha - gamma);
    const double ab = std::abs(beta);
    const double r = std::hypot(d, ab);
    // t = lambda_plus - gamma, computed without cancellation for either sign of d.
    const double t = (d >= 0.0) ? (d + r) : (std::norm(beta) / (r - d));
    const double nrm = std::sqrt(t * t + std::norm(beta));
    const double c = t / nrm;
    const cplx s = std::conj(beta) / nrm;

    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) {
            continue;
        }
        const cplx aip = a(i, p);
        const cplx aiq = a(i, q);
        a(i, p) = c * aip + s * aiq;
        a(i, q) = -std::conj(s) * aip + c * aiq;
        a(p, i) = std::conj(a(i, p));
        a(q, i) = std::conj(a(i, q));
    }
    const double mean = 0.5 * (alpha + gamma);
    a(p, p) = mean + r;
    a(q, q) = mean - r;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const cplx vip = v(i, p);
        const cplx viq = v(i, q);
        v(i, p) = c * vip + s * viq;
        v(i, q) = -std::conj(s) * vip + c * viq;
    }
}

double max_off_diagonal(const ComplexMatrix &a) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = r + 1; c < a.cols(); ++c) {
            m = std::max(m, std::abs(a(r, c)));
        }
    }
    return m;
}

} // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix &m, const Tolerances &tol) {
    if (!m.is_square()) {
        throw std::invalid_argument("hermitian_eig requires a square matrix");
    }
    if (!m.is_hermitian(tol.hermitian)) {
        throw std::invalid_argument("hermitian_eig requires a Hermitian matrix");
    }
    const std::size_t n = m.rows();

    // Work on the exactly Hermitian average of m and its adjoint so the
    // rotations see real diagonals even when m carries tolerance-level noise.
    ComplexMatrix a = m;
    const ComplexMatrix ad = m.adjoint();
    a += ad;
    a *= cplx{0.5, 0.0};

    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (max_off_diagonal(a) > tol.jacobi_off_diagonal) {
        if (++sweep > kMaxSweeps) {
            throw NumericalError("Jacobi eigensolver failed to converge");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) > 0.0) {
                    jacobi_rotate(a, v, p, q);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.assign(n, std::vector<cplx>(n));
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors[k][i] = v(i, order[k]);
        }
    }
    return out;
}

double fidelity_pure(const ComplexMatrix &rho, const std::vector<cplx> &psi,
                     const Tolerances &tol) {
    if (!rho.is_square() || rho.rows() != psi.size()) {
        throw std::invalid_argument("fidelity_pure shape mismatch");
    }
    double psi_norm2 = 0.0;
    for (const auto &x : psi) {
        psi_norm2 += std::norm(x);
    }
    if (std::abs(psi_norm2 - 1.0) > 1e-8) {
        throw std::invalid_argument("fidelity_pure requires a unit-norm target vector");
    }
    if (!rho.is_hermitian(tol.hermitian)) {
        throw NotADensityOperatorError("fidelity_pure input is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-8) {
        throw NotADensityOperatorError("fidelity_pure input does not have unit trace");
    }
    const EigenDecomposition eig = hermitian_eig(rho, tol);
    if (eig.eigenvalues.front() < -tol.psd) {
        throw NotADensityOperatorError("fidelity_pure input has a negative eigenvalue");
    }

    cplx overlap{0.0, 0.0};
    const std::vector<cplx> rp = apply(rho, psi);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        overlap += std::conj(psi[i]) * rp[i];
    }
    return std::clamp(overlap.real(), 0.0, 1.0);
}

std::string matrix_to_json(const ComplexMatrix &m) {
    nlohmann::json j;
    j["dims"] = {m.rows(), m.cols()};
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j.dump();
}

ComplexMatrix matrix_from_json(const std::string &text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("dims") || !j.contains("re") || !j.contains("im")) {
        throw std::invalid_argument("matrix JSON requires dims, re, im");
    }
    const auto dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2) {
        throw std::invalid_argument("matrix JSON dims must be [rows, cols]");
    }
    const std::size_t rows = dims.at(0).get<std::size_t>();
    const std::size_t cols = dims.at(1).get<std::size_t>();
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (re.size() != rows || im.size() != rows) {
        throw std::invalid_argument("matrix JSON row count mismatch");
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (re.at(r).size() != cols || im.at(r).size() != cols) {
            throw std::invalid_argument("matrix JSON column count mismatch");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = cplx{re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>()};
        }
    }
    return m;
}

} // namespace pdolab
