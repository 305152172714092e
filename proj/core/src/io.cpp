// Copyright 2026 The mimsi Authors
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

#include "mimsi/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "mimsi/cluster.hpp"

namespace mimsi::io {

namespace {

using nlohmann::json;

constexpr const char *kCovFormat = "mimsi-covariance";

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        return __builtin_bswap64(v);
    }
    return v;
}

std::ofstream open_out(const fs::path &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream &out, const fs::path &path) {
    out.flush();
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

json label_json(const ModeLabel &l) {
    return json{{"rail", std::string(1, rail_name(l.rail))}, {"t", l.t}};
}

ModeLabel label_from_json(const json &j) {
    if (!j.is_object() || !j.contains("rail") || !j.contains("t")) {
        throw InvalidArgument("plan record needs \"rail\" and \"t\"");
    }
    if (!j["rail"].is_string() || !j["t"].is_number_unsigned()) {
        throw InvalidArgument("plan record: \"rail\" must be a string and \"t\" a non-negative integer");
    }
    return {parse_rail(j["rail"].get<std::string>()), j["t"].get<std::size_t>()};
}

std::vector<ModeLabel> labels_of(const GaussianState &state) {
    if (state.has_labels()) {
        return state.labels();
    }
    return dual_rail_labels(state.n_modes() / 2);
}

std::size_t resolve(const ModeLabel &l, const std::vector<ModeLabel> &labels) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == l) {
            return k;
        }
    }
    throw InvalidArgument("plan refers to mode " + l.str() + ", which the state does not contain");
}

void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &where) {
    std::string bad;
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) {
            ok = ok || it.key() == a;
        }
        if (!ok) {
            bad += (bad.empty() ? "" : ", ") + it.key();
        }
    }
    if (!bad.empty()) {
        throw InvalidArgument(where + ": unknown keys: " + bad);
    }
}

json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw InvalidArgument(what + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path &path, const std::string &text) {
    auto out = open_out(path, std::ios::binary);
    out << text;
    finish(out, path);
}

std::string covariance_header(const GaussianState &state) {
    json h;
    h["format"] = kCovFormat;
    h["version"] = 1;
    h["n_modes"] = state.n_modes();
    h["ordering"] = "xxpp";
    h["hbar"] = 2;
    h["squeezing_convention"] = "r>0 squeezes x";
    h["dtype"] = "float64-le";
    h["layout"] = "row-major";
    json labels = json::array();
    if (state.has_labels()) {
        for (const auto &l : state.labels()) {
            labels.push_back(l.str());
        }
    }
    h["labels"] = labels;
    return h.dump();
}

void write_covariance(const fs::path &path, const GaussianState &state) {
    auto out = open_out(path, std::ios::binary);
    out << covariance_header(state) << '\n';
    const RealMatrix &v = state.cov();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v(r, c)));
            out.write(reinterpret_cast<const char *>(&bits), sizeof(bits));
        }
    }
    finish(out, path);
}

GaussianState read_covariance(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + ": missing covariance header");
    }
    json h;
    try {
        h = json::parse(line);
    } catch (const json::parse_error &e) {
        throw IoError(path.string() + ": bad covariance header: " + e.what());
    }
    if (h.value("format", "") != kCovFormat || h.value("ordering", "") != "xxpp" || h.value("hbar", 0) != 2) {
        throw IoError(path.string() + ": not an xxpp, hbar=2 covariance file");
    }
    auto n = h.at("n_modes").get<std::size_t>();
    auto dim = static_cast<Eigen::Index>(2 * n);
    RealMatrix v(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            std::uint64_t bits = 0;
            if (!in.read(reinterpret_cast<char *>(&bits), sizeof(bits))) {
                throw IoError(path.string() + ": truncated covariance data");
            }
            v(r, c) = std::bit_cast<double>(to_le(bits));
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw IoError(path.string() + ": trailing bytes after covariance data");
    }
    std::vector<ModeLabel> labels;
    for (const auto &s : h.value("labels", json::array())) {
        std::string text = s.get<std::string>();
        if (text.size() < 2) {
            throw IoError(path.string() + ": bad mode label " + text);
        }
        labels.push_back({parse_rail(text.substr(0, 1)), static_cast<std::size_t>(std::stoul(text.substr(1)))});
    }
    try {
        return GaussianState(std::move(v), std::move(labels));
    } catch (const InvalidArgument &e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_matrix_csv(const fs::path &path, const RealMatrix &m) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << (c ? "," : "") << format_double(m(r, c));
        }
        out << '\n';
    }
    finish(out, path);
}

void write_covariance_csv(const fs::path &path, const GaussianState &state) {
    write_matrix_csv(path, state.cov());
}

MeasurementPlan parse_plan(const std::string &text, const GaussianState &state) {
    json j = parse_json(text, "plan");
    std::vector<ModeLabel> labels = labels_of(state);
    json records;
    std::optional<json> outputs;
    if (j.is_array()) {
        records = j;
    } else if (j.is_object()) {
        check_keys(j, {"measure", "outputs"}, "plan");
        if (!j.contains("measure")) {
            throw InvalidArgument("plan: missing \"measure\"");
        }
        records = j["measure"];
        if (j.contains("outputs")) {
            outputs = j["outputs"];
        }
    } else {
        throw InvalidArgument("plan must be a JSON list or object");
    }
    if (!records.is_array()) {
        throw InvalidArgument("plan: \"measure\" must be a list");
    }
    MeasurementPlan plan;
    std::vector<bool> used(state.n_modes(), false);
    for (const auto &rec : records) {
        if (!rec.is_object()) {
            throw InvalidArgument("plan records must be objects");
        }
        check_keys(rec, {"rail", "t", "theta"}, "plan record");
        if (!rec.contains("theta") || !rec["theta"].is_number()) {
            throw InvalidArgument("plan record needs a numeric \"theta\"");
        }
        std::size_t k = resolve(label_from_json(rec), labels);
        plan.entries.push_back({k, rec["theta"].get<double>()});
        used[k] = true;
    }
    if (outputs) {
        if (!outputs->is_array()) {
            throw InvalidArgument("plan: \"outputs\" must be a list");
        }
        for (const auto &o : *outputs) {
            check_keys(o, {"rail", "t"}, "plan output");
            plan.outputs.push_back(resolve(label_from_json(o), labels));
        }
    } else {
        for (std::size_t k = 0; k < used.size(); ++k) {
            if (!used[k]) {
                plan.outputs.push_back(k);
            }
        }
    }
    plan.validate(state.n_modes());
    return plan;
}

MeasurementPlan read_plan(const fs::path &path, const GaussianState &state) {
    return parse_plan(read_text(path), state);
}

std::string plan_to_json(const MeasurementPlan &plan, const GaussianState &state) {
    std::vector<ModeLabel> labels = labels_of(state);
    json measure = json::array();
    for (const auto &e : plan.entries) {
        json rec = label_json(labels.at(e.mode));
        rec["theta"] = e.theta;
        measure.push_back(rec);
    }
    json outputs = json::array();
    for (std::size_t k : plan.outputs) {
        outputs.push_back(label_json(labels.at(k)));
    }
    return json{{"measure", measure}, {"outputs", outputs}}.dump(2) + "\n";
}

std::string circuit_to_json(const EffectiveCircuit &circuit) {
    const ComplexMatrix &u = circuit.u_eff.mat();
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        json rr = json::array();
        json ii = json::array();
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            rr.push_back(u(r, c).real());
            ii.push_back(u(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    json r = json::array();
    for (Eigen::Index k = 0; k < circuit.r_eff.values().size(); ++k) {
        r.push_back(circuit.r_eff.values()(k));
    }
    json j;
    j["gauge_version"] = EffectiveCircuit::kGaugeVersion;
    j["n_modes"] = circuit.n_modes();
    j["real"] = re;
    j["imag"] = im;
    j["r_eff"] = r;
    j["purity_residual"] = circuit.purity_residual;
    return j.dump() + "\n";
}

EffectiveCircuit circuit_from_json(const std::string &text) {
    json j = parse_json(text, "effective circuit");
    try {
        auto n = j.at("n_modes").get<std::size_t>();
        auto k = static_cast<Eigen::Index>(n);
        const json &re = j.at("real");
        const json &im = j.at("imag");
        const json &r = j.at("r_eff");
        if (re.size() != n || im.size() != n || r.size() != n) {
            throw InvalidArgument("effective circuit: array sizes do not match n_modes");
        }
        ComplexMatrix u(k, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            const json &rr = re[static_cast<std::size_t>(a)];
            const json &ii = im[static_cast<std::size_t>(a)];
            if (rr.size() != n || ii.size() != n) {
                throw InvalidArgument("effective circuit: ragged matrix");
            }
            for (Eigen::Index b = 0; b < k; ++b) {
                u(a, b) = Complex(rr[static_cast<std::size_t>(b)].get<double>(),
                                  ii[static_cast<std::size_t>(b)].get<double>());
            }
        }
        RealVector rv(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            rv(a) = r[static_cast<std::size_t>(a)].get<double>();
        }
        return {PassiveUnitary(std::move(u), 1e-8), SqueezingVector(std::move(rv)),
                j.at("purity_residual").get<double>()};
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("effective circuit: ") + e.what());
    }
}

void write_histogram_csv(const fs::path &path, const HistogramReport &h) {
    auto out = open_out(path);
    out << "bin_left,bin_right,frequency\n";
    for (std::size_t k = 0; k < h.n_bins(); ++k) {
        out << format_double(h.bin_edges[k]) << ',' << format_double(h.bin_edges[k + 1]) << ','
            << format_double(h.frequencies[k]) << '\n';
    }
    finish(out, path);
}

}  // namespace mimsi::io
