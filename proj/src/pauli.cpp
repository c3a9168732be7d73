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

#include "pdolab/pauli.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdolab {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    throw std::invalid_argument("invalid Pauli label");
}

std::string to_string(const PauliString &s) {
    std::string out;
    out.reserve(s.size());
    for (Pauli p : s) {
        out.push_back(pauli_char(p));
    }
    return out;
}

PauliString pauli_string_from_text(const std::string &text) {
    if (text.empty()) {
        throw std::invalid_argument("Pauli string must cover at least one slot");
    }
    PauliString s;
    s.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I': s.push_back(Pauli::I); break;
            case 'X': s.push_back(Pauli::X); break;
            case 'Y': s.push_back(Pauli::Y); break;
            case 'Z': s.push_back(Pauli::Z); break;
            default:
                throw std::invalid_argument("invalid Pauli character in \"" + text + "\"");
        }
    }
    return s;
}

ComplexMatrix pauli_matrix(Pauli p) {
    ComplexMatrix m(2, 2);
    switch (p) {
        case Pauli::I:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case Pauli::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Pauli::Y:
            m(0, 1) = cplx{0.0, -1.0};
            m(1, 0) = cplx{0.0, 1.0};
            break;
        case Pauli::Z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

ComplexMatrix pauli_matrix(const PauliString &s) {
    if (s.empty()) {
        throw std::invalid_argument("pauli_matrix requires at least one slot");
    }
    ComplexMatrix m = pauli_matrix(s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        m = tensor(m, pauli_matrix(s[k]));
    }
    return m;
}

namespace {

std::size_t slot_count_for_dim(std::size_t dim) {
    std::size_t n = 0;
    std::size_t d = 1;
    while (d < dim) {
        d *= 2;
        ++n;
    }
    if (d != dim || n == 0) {
        throw std::invalid_argument("matrix dimension is not a power of two >= 2");
    }
    return n;
}

PauliString string_from_rank(std::size_t rank, std::size_t n_slots) {
    PauliString s(n_slots);
    for (std::size_t k = n_slots; k-- > 0;) {
        s[k] = static_cast<Pauli>(rank % 4);
        rank /= 4;
    }
    return s;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace

CorrelationTable expand(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw std::invalid_argument("expand requires a square matrix");
    }
    const std::size_t n = slot_count_for_dim(m.rows());
    if (!m.is_hermitian()) {
        throw std::invalid_argument("expand requires a Hermitian matrix");
    }

    CorrelationTable t;
    t.n_slots = n;
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        total *= 4;
    }
    for (std::size_t rank = 0; rank < total; ++rank) {
        const PauliString s = string_from_rank(rank, n);
        const cplx c = (m * pauli_matrix(s)).trace();
        if (std::abs(c.imag()) > 1e-10) {
            throw std::invalid_argument("expansion coefficient is not real");
        }
        t.entries[s] = Estimate{c.real(), std::nullopt};
    }
    return t;
}

ComplexMatrix assemble(const CorrelationTable &t) {
    if (t.n_slots == 0) {
        throw std::invalid_argument("assemble requires at least one slot");
    }
    const PauliString all_i(t.n_slots, Pauli::I);
    const auto it = t.entries.find(all_i);
    if (it == t.entries.end()) {
        throw std::invalid_argument("assemble requires the all-I entry");
    }
    if (std::abs(it->second.value - 1.0) > 1e-9) {
        throw std::invalid_argument("assemble requires the all-I entry to equal 1");
    }

    std::size_t dim = 1;
    for (std::size_t k = 0; k < t.n_slots; ++k) {
        dim *= 2;
    }
    ComplexMatrix m(dim, dim);
    for (const auto &[s, est] : t.entries) {
        if (s.size() != t.n_slots) {
            throw std::invalid_argument("table entry has wrong slot count");
        }
        if (est.value == 0.0) {
            continue;
        }
        m += est.value * pauli_matrix(s);
    }
    m *= cplx{1.0 / static_cast<double>(dim), 0.0};
    return m;
}

Matrix3 correlation_3x3(const CorrelationTable &t, std::size_t slot_a, std::size_t slot_b) {
    if (t.n_slots < 2) {
        throw std::invalid_argument("correlation_3x3 requires at least two slots");
    }
    if (slot_a >= t.n_slots || slot_b >= t.n_slots) {
        throw std::invalid_argument("correlation_3x3 slot index out of range");
    }
    if (slot_a == slot_b) {
        throw std::invalid_argument("correlation_3x3 requires distinct slots");
    }
    static constexpr Pauli kAxes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    Matrix3 out{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            PauliString s(t.n_slots, Pauli::I);
            s[slot_a] = kAxes[a];
            s[slot_b] = kAxes[b];
            const auto it = t.entries.find(s);
            out[a][b] = (it == t.entries.end()) ? 0.0 : it->second.value;
        }
    }
    return out;
}

std::string table_to_csv(const CorrelationTable &t) {
    std::string out = "string,value,stderr\n";
    for (const auto &[s, est] : t.entries) {
        out += to_string(s);
        out += ',';
        out += format_double(est.value);
        out += ',';
        if (est.se) {
            out += format_double(*est.se);
        }
        out += '\n';
    }
    return out;
}

CorrelationTable table_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "string,value,stderr") {
        throw std::invalid_argument("correlation CSV must start with string,value,stderr");
    }
    CorrelationTable t;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw std::invalid_argument("malformed correlation CSV row: " + line);
        }
        const PauliString s = pauli_string_from_text(line.substr(0, c1));
        Estimate est;
        const std::string value_text = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string se_text = line.substr(c2 + 1);
        const auto vres =
            std::from_chars(value_text.data(), value_text.data() + value_text.size(), est.value);
        if (vres.ec != std::errc{} || vres.ptr != value_text.data() + value_text.size()) {
            throw std::invalid_argument("malformed value in correlation CSV row: " + line);
        }
        if (!se_text.empty()) {
            double se = 0.0;
            const auto sres = std::from_chars(se_text.data(), se_text.data() + se_text.size(), se);
            if (sres.ec != std::errc{} || sres.ptr != se_text.data() + se_text.size()) {
                throw std::invalid_argument("malformed stderr in correlation CSV row: " + line);
            }
            est.se = se;
        }
        if (t.n_slots == 0) {
            t.n_slots = s.size();
        } else if (s.size() != t.n_slots) {
            throw std::invalid_argument("inconsistent string length in correlation CSV");
        }
        t.entries[s] = est;
    }
    if (t.n_slots == 0) {
        throw std::invalid_argument("correlation CSV has no rows");
    }
    return t;
}

} // namespace pdolab
