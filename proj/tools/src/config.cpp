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

#include "mimsi_cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>

#include "mimsi/io.hpp"

namespace mimsi::cli {

namespace {

constexpr double kPi = std::numbers::pi;

json paper_source(std::size_t m_bins) {
    return json{{"m_bins", m_bins},
                {"delays", {1, 8}},
                {"squeeze_a_db", 2.3},
                {"squeeze_b_db", 3.0},
                {"phase_mask", json::array({{{"rail_a", 0.0}, {"rail_b", kPi / 2}}, {{"rail_a", 0.0}, {"rail_b", kPi / 2}}})}};
}

}  // namespace

ObjectReader::ObjectReader(const json &j, std::string path, std::vector<std::string> &unknown)
    : j_(j), path_(std::move(path)), unknown_(unknown) {
    if (!j_.is_object()) {
        throw InvalidArgument("config: " + (path_.empty() ? std::string("top level") : path_) + " must be an object");
    }
}

ObjectReader::~ObjectReader() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
        if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
            unknown_.push_back(path_of(it.key()));
        }
    }
}

bool ObjectReader::has(const std::string &key) const {
    return j_.contains(key);
}

const json &ObjectReader::raw(const std::string &key) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        seen_.push_back(key);
    }
    return j_.at(key);
}

std::string ObjectReader::path_of(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
}

void raise_unknown(const std::vector<std::string> &unknown) {
    if (unknown.empty()) {
        return;
    }
    std::string msg = "config: unknown keys: ";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
        msg += (i ? ", " : "") + unknown[i];
    }
    throw InvalidArgument(msg);
}

ClusterConfig parse_cluster(const json &j, const std::string &path, std::vector<std::string> &unknown) {
    ClusterConfig c;
    {
        ObjectReader r(j, path, unknown);
        c.m_bins = r.require<std::size_t>("m_bins");
        c.delays = r.require<std::vector<std::size_t>>("delays");
        c.squeeze_a_db = r.get<double>("squeeze_a_db", 0.0);
        c.squeeze_b_db = r.get<double>("squeeze_b_db", 0.0);
        c.loss_eta = r.get<std::vector<double>>("loss_eta", {});
        c.clock_tau_ns = r.get<double>("clock_tau_ns", c.clock_tau_ns);
        if (r.has("phase_mask")) {
            const json &mask = r.raw("phase_mask");
            if (!mask.is_array()) {
                throw InvalidArgument("config: " + r.path_of("phase_mask") + " must be a list");
            }
            for (std::size_t i = 0; i < mask.size(); ++i) {
                ObjectReader m(mask[i], r.path_of("phase_mask") + "[" + std::to_string(i) + "]", unknown);
                c.phase_mask.push_back({m.get<double>("rail_a", 0.0), m.get<double>("rail_b", 0.0)});
            }
        }
    }
    c.validate();
    return c;
}

json cluster_to_json(const ClusterConfig &c) {
    json mask = json::array();
    for (const auto &p : c.phase_mask) {
        mask.push_back({{"rail_a", p.rail_a}, {"rail_b", p.rail_b}});
    }
    json j{{"m_bins", c.m_bins},
           {"delays", c.delays},
           {"squeeze_a_db", c.squeeze_a_db},
           {"squeeze_b_db", c.squeeze_b_db},
           {"clock_tau_ns", c.clock_tau_ns}};
    if (!mask.empty()) {
        j["phase_mask"] = mask;
    }
    if (!c.loss_eta.empty()) {
        j["loss_eta"] = c.loss_eta;
    }
    return j;
}

Strategy::Kind parse_strategy_kind(const std::string &name) {
    if (name == "linear") {
        return Strategy::Kind::Linear;
    }
    if (name == "knights") {
        return Strategy::Kind::Knights;
    }
    throw InvalidArgument("config: unknown strategy '" + name + "' (expected linear or knights)");
}

std::string strategy_name(Strategy::Kind kind) {
    return kind == Strategy::Kind::Linear ? "linear" : "knights";
}

Strategy parse_strategy(const json &j, const std::string &path, std::vector<std::string> &unknown) {
    ObjectReader r(j, path, unknown);
    Strategy s;
    s.kind = parse_strategy_kind(r.get<std::string>("kind", "linear"));
    s.n_out = r.get<std::size_t>("n_out", 0);
    s.layout.stride = r.get<std::size_t>("stride", s.layout.stride);
    s.layout.first_rail = parse_rail(r.get<std::string>("first_rail", "A"));
    if (r.has("t0")) {
        s.layout.t0 = r.get<std::size_t>("t0", 0);
    }
    if (s.kind == Strategy::Kind::Linear && r.has("n_out")) {
        throw InvalidArgument("config: " + r.path_of("n_out") + " applies to the knights strategy only");
    }
    return s;
}

TestDistribution parse_test_distribution(const json &j, const std::string &path, std::vector<std::string> &unknown) {
    ObjectReader r(j, path, unknown);
    TestDistribution d;
    std::string kind = r.get<std::string>("kind", "uniform");
    if (kind == "uniform") {
        d.kind = TestDistribution::Kind::Uniform;
    } else if (kind == "point") {
        d.kind = TestDistribution::Kind::Point;
    } else {
        throw InvalidArgument("config: " + r.path_of("kind") + " must be uniform or point");
    }
    d.low = r.get<double>("low", d.low);
    d.high = r.get<double>("high", d.high);
    d.validate();
    return d;
}

std::optional<json> preset(const std::string &subcommand, const std::string &name) {
    if (subcommand == "build-cluster" && name == "paper-geometry") {
        return json{{"cluster", paper_source(24)}};
    }
    if (subcommand == "condition" && name == "six-mode-sweep") {
        return json{{"cluster", paper_source(16)},
                    {"keep_bins", {5, 10}},
                    {"strategy", {{"kind", "linear"}}},
                    {"thetas", "random"},
                    {"sweep", {{"index", 2}, {"values", {-kPi / 2, -kPi / 4, 0.0, kPi / 4, kPi / 2}}}}};
    }
    if (subcommand == "haar-run" && name == "paper-400") {
        return json{{"cluster", paper_source(400)},
                    {"strategy", {{"kind", "linear"}}},
                    {"thetas", "random"},
                    {"n_bins", 60},
                    {"edge_trim", 0},
                    {"calibration_samples", 3}};
    }
    if (subcommand == "expressibility" && name == "fig2") {
        return json{{"delays", json::array({1})},
                    {"r_in", {0.0, 0.5, 1.0}},
                    {"n_modes", {2, 6}},
                    {"strategies", json::array({"linear", "knights"})},
                    {"knights", {{"stride", 2}, {"first_rail", "A"}, {"bins_per_output", 2}}},
                    {"p_test", {{"kind", "uniform"}, {"low", -0.5}, {"high", 0.5}}},
                    {"t", {1, 2}},
                    {"n_pairs", 10000},
                    {"n_rtest", 10},
                    {"n_batches", 20}};
    }
    return std::nullopt;
}

std::vector<std::string> preset_names(const std::string &subcommand) {
    if (subcommand == "build-cluster") {
        return {"paper-geometry"};
    }
    if (subcommand == "condition") {
        return {"six-mode-sweep"};
    }
    if (subcommand == "haar-run") {
        return {"paper-400"};
    }
    if (subcommand == "expressibility") {
        return {"fig2"};
    }
    return {};
}

std::string config_hash(const json &config) {
    std::string text = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json load_json_file(const std::filesystem::path &path) {
    std::string text = io::read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw InvalidArgument("config " + path.string() + ": " + e.what());
    }
}

}  // namespace mimsi::cli
