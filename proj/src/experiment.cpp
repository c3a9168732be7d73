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

#include "pdolab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "pdolab/errors.hpp"
#include "pdolab/rng.hpp"

namespace pdolab {

namespace {

// Seed substreams of one run: quorum settings take 0..35 inside
// measure_quorum; the CHSH quartets take 36..43; the bootstrap takes 64.
constexpr std::uint64_t kChsh12StreamBase = 36;
constexpr std::uint64_t kChsh23StreamBase = 40;
constexpr std::uint64_t kBootstrapStream = 64;

std::pair<std::size_t, std::size_t> line_col(const std::string &text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void reject_unknown_keys(const nlohmann::json &obj, const std::set<std::string> &allowed,
                         const std::string &path) {
    for (const auto &[key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw SpecError("unknown field: " + (path.empty() ? key : path + "." + key));
        }
    }
}

ComplexMatrix named_unitary(const std::string &name) {
    if (name == "I") {
        return ComplexMatrix::identity(2);
    }
    if (name == "X") {
        return pauli_matrix(Pauli::X);
    }
    if (name == "Y") {
        return pauli_matrix(Pauli::Y);
    }
    if (name == "Z") {
        return pauli_matrix(Pauli::Z);
    }
    if (name == "H") {
        ComplexMatrix h(2, 2);
        const double s = 1.0 / std::sqrt(2.0);
        h(0, 0) = s;
        h(0, 1) = s;
        h(1, 0) = s;
        h(1, 1) = -s;
        return h;
    }
    if (name == "S") {
        ComplexMatrix m = ComplexMatrix::identity(2);
        m(1, 1) = cplx{0.0, 1.0};
        return m;
    }
    throw SpecError("source.otc_unitary: unknown unitary name \"" + name + "\"");
}

ComplexMatrix matrix_2x2_from_parts(const nlohmann::json &re, const nlohmann::json &im) {
    const auto check = [](const nlohmann::json &part, const char *label) {
        if (!part.is_array() || part.size() != 2 || !part.at(0).is_array() ||
            part.at(0).size() != 2 || !part.at(1).is_array() || part.at(1).size() != 2) {
            throw SpecError(std::string("source.otc_unitary.") + label + " must be a 2x2 array");
        }
        for (const auto &row : part) {
            for (const auto &x : row) {
                if (!x.is_number()) {
                    throw SpecError(std::string("source.otc_unitary.") + label +
                                    " entries must be numbers");
                }
            }
        }
    };
    check(re, "re");
    check(im, "im");
    ComplexMatrix u(2, 2);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            u(r, c) = cplx{re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>()};
        }
    }
    return u;
}

ComplexMatrix rotation_unitary(const nlohmann::json &axis_json, const nlohmann::json &angle_json) {
    if (!axis_json.is_array() || axis_json.size() != 3 || !axis_json.at(0).is_number() ||
        !axis_json.at(1).is_number() || !axis_json.at(2).is_number()) {
        throw SpecError("source.otc_unitary.axis must be an array of 3 numbers");
    }
    if (!angle_json.is_number()) {
        throw SpecError("source.otc_unitary.angle must be a number (radians)");
    }
    Axis n{axis_json.at(0).get<double>(), axis_json.at(1).get<double>(),
           axis_json.at(2).get<double>()};
    try {
        n = normalized(n);
    } catch (const std::invalid_argument &) {
        throw SpecError("source.otc_unitary.axis must be nonzero");
    }
    const double half = 0.5 * angle_json.get<double>();
    ComplexMatrix u = ComplexMatrix::identity(2);
    u *= cplx{std::cos(half), 0.0};
    ComplexMatrix s = axis_operator(n);
    s *= cplx{0.0, -std::sin(half)};
    u += s;
    return u;
}

ComplexMatrix unitary_from_json(const nlohmann::json &j) {
    if (j.is_string()) {
        return named_unitary(j.get<std::string>());
    }
    if (j.is_object()) {
        if (j.contains("axis") || j.contains("angle")) {
            reject_unknown_keys(j, {"axis", "angle"}, "source.otc_unitary");
            if (!j.contains("axis") || !j.contains("angle")) {
                throw SpecError("source.otc_unitary rotation form needs both axis and angle");
            }
            return rotation_unitary(j.at("axis"), j.at("angle"));
        }
        if (j.contains("re") || j.contains("im")) {
            reject_unknown_keys(j, {"re", "im"}, "source.otc_unitary");
            if (!j.contains("re") || !j.contains("im")) {
                throw SpecError("source.otc_unitary matrix form needs both re and im");
            }
            const ComplexMatrix u = matrix_2x2_from_parts(j.at("re"), j.at("im"));
            if (!u.is_unitary(1e-10)) {
                throw SpecError("source.otc_unitary: matrix is not unitary");
            }
            return u;
        }
        throw SpecError("source.otc_unitary object must use axis/angle or re/im");
    }
    throw SpecError("source.otc_unitary must be a name or an object");
}

std::uint64_t integer_field(const nlohmann::json &j, const std::string &path) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer()) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw SpecError(path + " must be an integer");
}

const std::vector<std::string> kOutputKinds = {"report_json", "coefficients_csv", "counts_csv"};

} // namespace

ExperimentSpec parse_spec(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        const auto [line, col] = line_col(text, e.byte);
        throw SpecError("spec syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(col));
    }
    if (!j.is_object()) {
        throw SpecError("spec must be a JSON object");
    }
    reject_unknown_keys(j, {"source", "shots_per_setting", "seed", "mode", "outputs"}, "");

    ExperimentSpec spec;
    if (j.contains("source")) {
        const auto &src = j.at("source");
        if (!src.is_object()) {
            throw SpecError("source must be an object");
        }
        reject_unknown_keys(src, {"visibility", "otc_unitary"}, "source");
        if (src.contains("visibility")) {
            if (!src.at("visibility").is_number()) {
                throw SpecError("source.visibility must be a number");
            }
            spec.visibility = src.at("visibility").get<double>();
            if (spec.visibility < 0.0 || spec.visibility > 1.0) {
                throw SpecError("source.visibility must lie in [0, 1]");
            }
        }
        if (src.contains("otc_unitary")) {
            spec.otc_unitary = unitary_from_json(src.at("otc_unitary"));
            spec.otc_unitary_spec = src.at("otc_unitary").dump();
        }
    }
    if (j.contains("shots_per_setting")) {
        spec.shots_per_setting = integer_field(j.at("shots_per_setting"), "shots_per_setting");
        if (spec.shots_per_setting == 0) {
            throw SpecError("shots_per_setting must be at least 1");
        }
    }
    if (j.contains("seed")) {
        spec.seed = integer_field(j.at("seed"), "seed");
        spec.seed_specified = true;
    }
    if (j.contains("mode")) {
        const auto &mode = j.at("mode");
        if (mode == "exact") {
            spec.mode = RunMode::exact;
        } else if (mode == "sampled") {
            spec.mode = RunMode::sampled;
        } else {
            throw SpecError("mode must be \"exact\" or \"sampled\"");
        }
    }
    if (j.contains("outputs")) {
        const auto &outs = j.at("outputs");
        if (!outs.is_array()) {
            throw SpecError("outputs must be an array");
        }
        std::set<std::string> wanted;
        for (std::size_t i = 0; i < outs.size(); ++i) {
            if (!outs.at(i).is_string()) {
                throw SpecError("outputs[" + std::to_string(i) + "] must be a string");
            }
            const std::string kind = outs.at(i).get<std::string>();
            if (std::find(kOutputKinds.begin(), kOutputKinds.end(), kind) == kOutputKinds.end()) {
                throw SpecError("outputs[" + std::to_string(i) + "]: unknown output kind \"" +
                                kind + "\"");
            }
            wanted.insert(kind);
        }
        spec.outputs.clear();
        for (const auto &kind : kOutputKinds) {
            if (wanted.count(kind)) {
                spec.outputs.push_back(kind);
            }
        }
    }
    return spec;
}

std::string serialize_spec(const ExperimentSpec &spec) {
    nlohmann::json j;
    j["source"]["visibility"] = spec.visibility;
    j["source"]["otc_unitary"] = nlohmann::json::parse(spec.otc_unitary_spec);
    j["shots_per_setting"] = spec.shots_per_setting;
    j["seed"] = spec.seed;
    j["mode"] = (spec.mode == RunMode::exact) ? "exact" : "sampled";
    j["outputs"] = spec.outputs;
    return j.dump();
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string spec_hash(const ExperimentSpec &spec) {
    const std::uint64_t h = fnv1a64(serialize_spec(spec));
    std::string out(16, '0');
    static const char *kHex = "0123456789abcdef";
    for (int k = 0; k < 16; ++k) {
        out[15 - k] = kHex[(h >> (4 * k)) & 0xF];
    }
    return out;
}

namespace {

void validate_spec(const ExperimentSpec &spec) {
    if (spec.visibility < 0.0 || spec.visibility > 1.0) {
        throw SpecError("source.visibility must lie in [0, 1]");
    }
    if (spec.otc_unitary.rows() != 2 || spec.otc_unitary.cols() != 2 ||
        !spec.otc_unitary.is_unitary(1e-10)) {
        throw SpecError("source.otc_unitary must be a 2x2 unitary");
    }
    if (spec.shots_per_setting == 0) {
        throw SpecError("shots_per_setting must be at least 1");
    }
    for (const auto &kind : spec.outputs) {
        if (std::find(kOutputKinds.begin(), kOutputKinds.end(), kind) == kOutputKinds.end()) {
            throw SpecError("outputs: unknown output kind \"" + kind + "\"");
        }
    }
}

Measure slot_measure(std::size_t slot, const Axis &axis) {
    switch (slot) {
        case 0: return Measure{Carrier::B, "t1", axis};
        case 1: return Measure{Carrier::A, "t1", axis};
        case 2: return Measure{Carrier::A, "t2", axis};
        default: throw std::invalid_argument("slot index out of range");
    }
}

ChshResult run_quartet(const SlotPair &pair, const ChshSettings &settings, const SourceModel &src,
                       const ExperimentSpec &spec, std::uint64_t stream_base,
                       std::map<std::string, CountsTable> &counts_out) {
    static const char *kNames[4] = {"a1b1", "a1b2", "a2b1", "a2b2"};
    std::array<CountsTable, 4> tables;
    std::array<Estimate, 4> corr;
    std::size_t k = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const std::vector<Measure> measures = {
                slot_measure(pair.first, settings.side1[i]),
                slot_measure(pair.second, settings.side2[j]),
            };
            const MeasurementTimeline timeline = make_timeline(measures, src);
            if (spec.mode == RunMode::exact) {
                corr[k] = estimate_correlator(exact_distribution(timeline), {0, 1});
            } else {
                tables[k] = sample(timeline, spec.shots_per_setting,
                                   derive_seed(spec.seed, stream_base + k));
                counts_out.emplace("chsh_" + slot_pair_name(pair) + "/" + kNames[k], tables[k]);
            }
            ++k;
        }
    }
    if (spec.mode == RunMode::exact) {
        return chsh_from_correlators(settings, corr, ChshSource::exact);
    }
    return chsh_from_counts(tables);
}

} // namespace

RunReport run(const ExperimentSpec &spec, const RunOptions &options) {
    validate_spec(spec);
    const SourceModel src{spec.visibility, spec.otc_unitary};
    const PseudoDensityOperator target = otc_pdo(spec.otc_unitary);

    RunReport rep;
    rep.spec = spec;
    rep.spec_digest = spec_hash(rep.spec);
    rep.tool_version = std::string(kToolName) + " " + std::string(kToolVersion);

    const QuorumPlan plan = build_quorum(spec.shots_per_setting);
    const QuorumData data = measure_quorum(plan, src, spec.mode, spec.seed);
    rep.reconstruction = reconstruct(plan, data, target);
    for (const auto &[id, sd] : data) {
        if (const auto *counts = std::get_if<CountsTable>(&sd)) {
            rep.counts.emplace(id, *counts);
        }
    }

    if (options.with_bell) {
        // Pair (1,2): spatial quartet, untouched by the source unitary.
        // Pair (2,3): temporal quartet with the t2 axes co-rotated with the
        // unitary so the planned settings stay optimal for the evolved state.
        ChshSettings temporal = default_temporal_settings();
        const Matrix3 rot = rotation_of_unitary(spec.otc_unitary);
        temporal.side2[0] = normalized(rotate_axis(rot, temporal.side2[0]));
        temporal.side2[1] = normalized(rotate_axis(rot, temporal.side2[1]));

        rep.chsh.emplace(SlotPair{0, 1}, run_quartet({0, 1}, default_spatial_settings(), src,
                                                     spec, kChsh12StreamBase, rep.counts));
        rep.chsh.emplace(SlotPair{1, 2},
                         run_quartet({1, 2}, temporal, src, spec, kChsh23StreamBase, rep.counts));

        const Matrix3 t13 = correlation_3x3(rep.reconstruction.table, 0, 2);
        const ChshOptimum opt13 = chsh_optimal(t13);
        ChshResult c13;
        c13.value = opt13.value;
        c13.settings = opt13.settings;
        c13.optimized = true;
        c13.source = ChshSource::reconstructed_marginal;
        if (spec.mode == RunMode::sampled) {
            c13.se = bootstrap_c13_stderr(plan, data, derive_seed(spec.seed, kBootstrapStream),
                                          options.bootstrap_resamples);
        }
        rep.chsh.emplace(SlotPair{0, 2}, c13);

        rep.monogamy = monogamy_check(rep.chsh);
    }

    if (options.with_disturbance) {
        rep.disturbance = disturbance_demo(spec.visibility);
    }

    const EventLabel q1{"Q1", "t1"}, q2{"Q2", "t1"}, q3{"Q3", "t2"};
    rep.physicality.emplace("canonical", physicality(target));
    rep.physicality.emplace("reconstructed", physicality(rep.reconstruction.pdo));
    rep.physicality.emplace("reconstructed_marginal_12",
                            physicality(marginal(rep.reconstruction.pdo, {q1, q2})));
    rep.physicality.emplace("reconstructed_marginal_13",
                            physicality(marginal(rep.reconstruction.pdo, {q1, q3})));
    rep.physicality.emplace("reconstructed_marginal_23",
                            physicality(marginal(rep.reconstruction.pdo, {q2, q3})));
    return rep;
}

namespace {

nlohmann::json axis_json(const Axis &a) { return nlohmann::json::array({a[0], a[1], a[2]}); }

nlohmann::json settings_json(const ChshSettings &s) {
    nlohmann::json j;
    j["side1"] = {axis_json(s.side1[0]), axis_json(s.side1[1])};
    j["side2"] = {axis_json(s.side2[0]), axis_json(s.side2[1])};
    return j;
}

nlohmann::json chsh_json(const ChshResult &r) {
    nlohmann::json j;
    j["value"] = r.value;
    j["stderr"] = r.se;
    j["settings"] = settings_json(r.settings);
    j["optimized"] = r.optimized;
    j["source"] = to_string(r.source);
    return j;
}

nlohmann::json physicality_json(const PhysicalityReport &p) {
    nlohmann::json j;
    j["min_eigenvalue"] = p.min_eigenvalue;
    j["negative_subspace_dim"] = p.negative_subspace_dim;
    j["is_physical"] = p.is_physical;
    return j;
}

nlohmann::json reconstruction_json(const ReconstructionReport &r) {
    nlohmann::json j;
    j["pdo"] = nlohmann::json::parse(pdo_to_json(r.pdo));
    j["eigenvalues"] = hermitian_eig(r.pdo.matrix).eigenvalues;

    const EventLabel q1{"Q1", "t1"}, q2{"Q2", "t1"}, q3{"Q3", "t2"};
    j["marginals"]["12"] = nlohmann::json::parse(pdo_to_json(marginal(r.pdo, {q1, q2})));
    j["marginals"]["13"] = nlohmann::json::parse(pdo_to_json(marginal(r.pdo, {q1, q3})));
    j["marginals"]["23"] = nlohmann::json::parse(pdo_to_json(marginal(r.pdo, {q2, q3})));

    j["fidelity_12"] = r.fidelity_12;
    j["fidelity_13"] = r.fidelity_13;
    j["max_coefficient_error"] = r.max_coefficient_error;
    j["completion_policy"] = to_string(r.completion_policy);

    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto &[s, est] : r.table.entries) {
        nlohmann::json entry;
        entry["string"] = to_string(s);
        entry["value"] = est.value;
        entry["stderr"] = est.se ? nlohmann::json(*est.se) : nlohmann::json(nullptr);
        coeffs.push_back(std::move(entry));
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

} // namespace

std::string report_to_json(const RunReport &r, const std::vector<ReportSection> &sections) {
    nlohmann::json j;
    j["tool"]["name"] = kToolName;
    j["tool"]["version"] = kToolVersion;
    j["spec"] = nlohmann::json::parse(serialize_spec(r.spec));
    j["spec_hash"] = r.spec_digest;

    for (ReportSection s : sections) {
        switch (s) {
            case ReportSection::reconstruction:
                j["reconstruction"] = reconstruction_json(r.reconstruction);
                break;
            case ReportSection::bell: {
                nlohmann::json chsh;
                for (const auto &[pair, res] : r.chsh) {
                    chsh[slot_pair_name(pair)] = chsh_json(res);
                }
                j["chsh"] = std::move(chsh);
                j["monogamy"] = nlohmann::json::parse(monogamy_to_json(r.monogamy));
                break;
            }
            case ReportSection::disturbance:
                j["disturbance"]["no_t1_measurement"] = r.disturbance.no_t1_measurement;
                j["disturbance"]["with_t1_measurement"] = r.disturbance.with_t1_measurement;
                break;
            case ReportSection::physicality: {
                nlohmann::json phys;
                for (const auto &[name, p] : r.physicality) {
                    phys[name] = physicality_json(p);
                }
                j["physicality"] = std::move(phys);
                break;
            }
        }
    }
    return j.dump(2) + "\n";
}

std::string report_to_json(const RunReport &r) {
    return report_to_json(r, {ReportSection::reconstruction, ReportSection::bell,
                              ReportSection::disturbance, ReportSection::physicality});
}

} // namespace pdolab
