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

#include "pdolab/bell.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "pdolab/errors.hpp"
#include "pdolab/rng.hpp"

namespace pdolab {

std::string to_string(ChshSource s) {
    switch (s) {
        case ChshSource::exact: return "exact";
        case ChshSource::counts: return "counts";
        case ChshSource::reconstructed_marginal: return "reconstructed_marginal";
    }
    throw std::invalid_argument("invalid CHSH source");
}

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Axis matvec3(const Matrix3 &T, const Axis &v) {
    Axis out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = T[i][0] * v[0] + T[i][1] * v[1] + T[i][2] * v[2];
    }
    return out;
}

double bilinear(const Axis &a, const Matrix3 &T, const Axis &b) { return dot(a, matvec3(T, b)); }

Axis cross(const Axis &a, const Axis &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Any unit vector orthogonal to a unit vector a.
Axis orthogonal_unit(const Axis &a) {
    const Axis trial = (std::abs(a[0]) < 0.9) ? axis_x() : axis_y();
    return normalized(cross(a, trial));
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace

ChshSettings default_spatial_settings() {
    return ChshSettings{{axis_z(), axis_x()},
                        {Axis{-kInvSqrt2, 0.0, -kInvSqrt2}, Axis{kInvSqrt2, 0.0, -kInvSqrt2}}};
}

ChshSettings default_temporal_settings() {
    return ChshSettings{{axis_z(), axis_x()},
                        {Axis{kInvSqrt2, 0.0, kInvSqrt2}, Axis{-kInvSqrt2, 0.0, kInvSqrt2}}};
}

double chsh_value(const Matrix3 &T, const ChshSettings &s) {
    for (const auto &axes : {s.side1, s.side2}) {
        for (const auto &a : axes) {
            if (std::abs(dot(a, a) - 1.0) > 2e-10) {
                throw std::invalid_argument("CHSH settings must be unit vectors");
            }
        }
    }
    return bilinear(s.side1[0], T, s.side2[0]) + bilinear(s.side1[0], T, s.side2[1]) +
           bilinear(s.side1[1], T, s.side2[0]) - bilinear(s.side1[1], T, s.side2[1]);
}

ChshOptimum chsh_optimal(const Matrix3 &T) {
    ComplexMatrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) {
                acc += T[k][i] * T[k][j];
            }
            m(i, j) = acc;
        }
    }
    const EigenDecomposition eig = hermitian_eig(m);
    const double m1 = std::max(eig.eigenvalues[2], 0.0);
    const double m2 = std::max(eig.eigenvalues[1], 0.0);

    ChshOptimum out;
    out.value = 2.0 * std::sqrt(m1 + m2);
    if (m1 < 1e-18) {
        out.settings = default_temporal_settings();
        return out;
    }

    Axis v1{}, v2{};
    for (int i = 0; i < 3; ++i) {
        v1[i] = eig.eigenvectors[2][i].real();
        v2[i] = eig.eigenvectors[1][i].real();
    }
    const double cos_phi = std::sqrt(m1 / (m1 + m2));
    const double sin_phi = std::sqrt(m2 / (m1 + m2));

    ChshSettings s;
    s.side1[0] = normalized(matvec3(T, v1));
    s.side1[1] = (m2 < 1e-18) ? orthogonal_unit(s.side1[0]) : normalized(matvec3(T, v2));
    for (int i = 0; i < 3; ++i) {
        s.side2[0][i] = cos_phi * v1[i] + sin_phi * v2[i];
        s.side2[1][i] = cos_phi * v1[i] - sin_phi * v2[i];
    }
    out.settings = s;

    if (std::abs(chsh_value(T, s) - out.value) > 1e-9) {
        throw NumericalError("optimal CHSH settings fail to reproduce the optimal value");
    }
    return out;
}

ChshResult chsh_from_correlators(const ChshSettings &s, const std::array<Estimate, 4> &corr,
                                 ChshSource source) {
    ChshResult r;
    r.value = corr[0].value + corr[1].value + corr[2].value - corr[3].value;
    double var = 0.0;
    for (const auto &c : corr) {
        if (c.se) {
            var += *c.se * *c.se;
        }
    }
    r.se = std::sqrt(var);
    r.settings = s;
    r.optimized = false;
    r.source = source;
    return r;
}

ChshResult chsh_from_counts(const std::array<CountsTable, 4> &quartet) {
    for (const auto &t : quartet) {
        if (t.setting.size() != 2) {
            throw std::invalid_argument("CHSH counts tables must have exactly two measurements");
        }
        if (t.shots == 0) {
            throw std::invalid_argument("CHSH counts tables must be nonempty");
        }
        for (int side = 0; side < 2; ++side) {
            if (t.setting[side].carrier != quartet[0].setting[side].carrier ||
                t.setting[side].time != quartet[0].setting[side].time) {
                throw std::invalid_argument("CHSH quartet mixes different events");
            }
        }
    }
    const Axis a1 = quartet[0].setting[0].axis;
    const Axis a2 = quartet[2].setting[0].axis;
    const Axis b1 = quartet[0].setting[1].axis;
    const Axis b2 = quartet[1].setting[1].axis;
    if (quartet[1].setting[0].axis != a1 || quartet[3].setting[0].axis != a2 ||
        quartet[2].setting[1].axis != b1 || quartet[3].setting[1].axis != b2 || a1 == a2 ||
        b1 == b2) {
        throw std::invalid_argument("CHSH counts tables do not form a settings quartet");
    }

    std::array<Estimate, 4> corr;
    for (int k = 0; k < 4; ++k) {
        corr[k] = estimate_correlator(quartet[k], {0, 1});
    }
    return chsh_from_correlators(ChshSettings{{a1, a2}, {b1, b2}}, corr, ChshSource::counts);
}

std::string slot_pair_name(const SlotPair &p) {
    return std::to_string(p.first + 1) + std::to_string(p.second + 1);
}

MonogamyReport monogamy_check(const std::map<SlotPair, ChshResult> &results) {
    for (const auto &[pair, r] : results) {
        if (pair.first == pair.second) {
            throw std::invalid_argument("CHSH pair must span two distinct slots");
        }
        (void)r;
    }
    MonogamyReport report;
    for (auto it = results.begin(); it != results.end(); ++it) {
        for (auto jt = std::next(it); jt != results.end(); ++jt) {
            std::optional<std::size_t> shared;
            for (std::size_t s : {it->first.first, it->first.second}) {
                if (s == jt->first.first || s == jt->first.second) {
                    shared = s;
                }
            }
            if (!shared) {
                continue;
            }
            MonogamySum sum;
            sum.first_pair = it->first;
            sum.second_pair = jt->first;
            sum.shared_slot = *shared;
            sum.sum = it->second.value + jt->second.value;
            sum.se = std::hypot(it->second.se, jt->second.se);
            if (sum.se > 0.0) {
                sum.sigmas = (sum.sum - report.bound) / sum.se;
            }
            report.sums.push_back(sum);
        }
    }
    if (report.sums.empty()) {
        throw std::invalid_argument("monogamy_check requires pairs sharing an event slot");
    }
    return report;
}

std::string monogamy_to_json(const MonogamyReport &r) {
    nlohmann::json j;
    j["bound"] = r.bound;
    nlohmann::json sums = nlohmann::json::array();
    for (const auto &s : r.sums) {
        nlohmann::json entry;
        entry["pairs"] = {slot_pair_name(s.first_pair), slot_pair_name(s.second_pair)};
        entry["shared_slot"] = s.shared_slot + 1;
        entry["sum"] = s.sum;
        entry["stderr"] = s.se;
        if (s.sigmas) {
            entry["sigmas"] = *s.sigmas;
        } else {
            entry["sigmas"] = nullptr;
        }
        sums.push_back(std::move(entry));
    }
    j["sums"] = std::move(sums);
    return j.dump();
}

std::string monogamy_summary_csv(const std::map<SlotPair, ChshResult> &results,
                                 const MonogamyReport &r) {
    std::string out = "quantity,value,stderr,sigmas\n";
    for (const auto &[pair, res] : results) {
        out += "chsh_" + slot_pair_name(pair) + "," + format_double(res.value) + "," +
               format_double(res.se) + ",\n";
    }
    for (const auto &s : r.sums) {
        out += "sum_" + slot_pair_name(s.first_pair) + "_" + slot_pair_name(s.second_pair) + "," +
               format_double(s.sum) + "," + format_double(s.se) + ",";
        if (s.sigmas) {
            out += format_double(*s.sigmas);
        }
        out += '\n';
    }
    return out;
}

double classical_bound_oracle() {
    double best = -8.0;
    for (int a1 : {-1, 1}) {
        for (int a2 : {-1, 1}) {
            for (int b1 : {-1, 1}) {
                for (int b2 : {-1, 1}) {
                    best = std::max(best, static_cast<double>(a1 * b1 + a1 * b2 + a2 * b1 -
                                                              a2 * b2));
                }
            }
        }
    }
    return best;
}

namespace {

// Multinomial redraw of one table from its empirical distribution.
CountsTable redraw_counts(const CountsTable &c, std::uint64_t seed) {
    std::vector<const OutcomeTuple *> outs;
    std::vector<double> cum;
    double acc = 0.0;
    for (const auto &[o, n] : c.counts) {
        if (n == 0) {
            continue;
        }
        acc += static_cast<double>(n);
        outs.push_back(&o);
        cum.push_back(acc);
    }
    std::vector<std::uint64_t> totals(outs.size(), 0);
    const double shots = static_cast<double>(c.shots);
    for (std::uint64_t i = 0; i < c.shots; ++i) {
        const double x = uniform_at(seed, i) * shots;
        const auto it = std::upper_bound(cum.begin(), cum.end(), x);
        const std::size_t idx =
            (it == cum.end()) ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
        ++totals[idx];
    }
    CountsTable out;
    out.setting = c.setting;
    out.shots = c.shots;
    for (std::size_t k = 0; k < outs.size(); ++k) {
        out.counts[*outs[k]] = totals[k];
    }
    return out;
}

double c13_resample(const QuorumPlan &plan, const QuorumData &data, std::uint64_t rseed) {
    QuorumData redrawn;
    std::uint64_t ordinal = 0;
    for (const auto &e : plan.ensembles) {
        for (const auto &s : e.settings) {
            const auto &c = std::get<CountsTable>(data.at(s.id));
            redrawn.emplace(s.id, redraw_counts(c, derive_seed(rseed, ordinal)));
            ++ordinal;
        }
    }
    const CorrelationTable table = reconstruct_table(plan, redrawn);
    return chsh_optimal(correlation_3x3(table, 0, 2)).value;
}

void validate_bootstrap_input(const QuorumPlan &plan, const QuorumData &data,
                              std::size_t resamples) {
    if (resamples < 2) {
        throw std::invalid_argument("bootstrap requires at least two resamples");
    }
    for (const auto &e : plan.ensembles) {
        for (const auto &s : e.settings) {
            const auto it = data.find(s.id);
            if (it == data.end()) {
                throw IncompleteQuorumError({s.id});
            }
            if (!std::holds_alternative<CountsTable>(it->second)) {
                throw std::invalid_argument("bootstrap requires sampled counts");
            }
        }
    }
}

double stddev(const std::vector<double> &values) {
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

} // namespace

double bootstrap_c13_stderr(const QuorumPlan &plan, const QuorumData &data, std::uint64_t seed,
                            std::size_t resamples) {
    validate_bootstrap_input(plan, data, resamples);
    std::vector<double> values(resamples, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long r = 0; r < static_cast<long long>(resamples); ++r) {
        values[static_cast<std::size_t>(r)] =
            c13_resample(plan, data, derive_seed(seed, static_cast<std::uint64_t>(r)));
    }
#else
    for (std::size_t r = 0; r < resamples; ++r) {
        values[r] = c13_resample(plan, data, derive_seed(seed, r));
    }
#endif
    return stddev(values);
}

double bootstrap_c13_stderr_serial(const QuorumPlan &plan, const QuorumData &data,
                                   std::uint64_t seed, std::size_t resamples) {
    validate_bootstrap_input(plan, data, resamples);
    std::vector<double> values(resamples, 0.0);
    for (std::size_t r = 0; r < resamples; ++r) {
        values[r] = c13_resample(plan, data, derive_seed(seed, r));
    }
    return stddev(values);
}

} // namespace pdolab
