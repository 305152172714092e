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

#include <cmath>
#include <numbers>
#include <sstream>

#include "mimsi/cluster.hpp"
#include "mimsi/conditioner.hpp"
#include "mimsi/decomposer.hpp"
#include "mimsi/expressibility.hpp"
#include "mimsi/haar_stats.hpp"
#include "mimsi/io.hpp"
#include "mimsi/random.hpp"
#include "mimsi_cli/cli.hpp"

namespace mimsi::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream ids under the master seed.
enum : std::uint64_t { kThetaStream = 101, kHaarStream = 102, kCalibrationStream = 103, kDeviationStream = 104 };

class Outputs {
  public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    fs::path add(const std::string &name) {
        names_.push_back(name);
        return dir_ / name;
    }
    std::vector<std::string> names() const { return names_; }

  private:
    fs::path dir_;
    std::vector<std::string> names_;
};

void write_json(const fs::path &path, const json &j) {
    io::write_text(path, j.dump(2) + "\n");
}

std::vector<double> resolve_thetas(ObjectReader &r, std::size_t count, std::uint64_t seed) {
    std::string mode = "random";
    if (r.has("thetas") && r.raw("thetas").is_array()) {
        auto thetas = r.get<std::vector<double>>("thetas", {});
        if (thetas.size() != count) {
            throw InvalidArgument("config: thetas has " + std::to_string(thetas.size()) + " entries, the plan needs " +
                                  std::to_string(count));
        }
        return thetas;
    }
    mode = r.get<std::string>("thetas", mode);
    if (mode != "random") {
        throw InvalidArgument("config: thetas must be a list of angles or \"random\"");
    }
    Rng rng = make_rng(seed, {kThetaStream});
    std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
    std::vector<double> thetas(count);
    for (double &t : thetas) {
        t = angle(rng);
    }
    return thetas;
}

GaussianState load_state(ObjectReader &r, std::vector<std::string> &unknown) {
    if (r.has("state") == r.has("cluster")) {
        throw InvalidArgument("config: give exactly one of state (a covariance file) or cluster");
    }
    if (r.has("state")) {
        return io::read_covariance(r.require<std::string>("state"));
    }
    return build_cluster(parse_cluster(r.raw("cluster"), "cluster", unknown));
}

GaussianState with_dual_rail_labels(const GaussianState &s) {
    if (s.has_labels()) {
        return s;
    }
    return GaussianState(s.cov(), dual_rail_labels(s.n_modes() / 2));
}

RealMatrix amplitude_matrix(const ComplexMatrix &u) {
    return u.cwiseAbs();
}

RealMatrix phase_matrix(const ComplexMatrix &u) {
    return u.unaryExpr([](const Complex &z) { return std::arg(z); });
}

void write_circuit_files(Outputs &out, const EffectiveCircuit &c) {
    io::write_text(out.add("circuit.json"), io::circuit_to_json(c));
    io::write_matrix_csv(out.add("u_amplitude.csv"), amplitude_matrix(c.u_eff.mat()));
    io::write_matrix_csv(out.add("u_phase.csv"), phase_matrix(c.u_eff.mat()));
    io::write_matrix_csv(out.add("r_eff.csv"), c.r_eff.values());
}

json deviation_json(const DeviationEstimate &e, std::size_t n_batches) {
    return json{{"t", e.t},
                {"value", e.value},
                {"stderr", e.std_error},
                {"n_pairs", e.n_pairs},
                {"n_rtest", e.n_rtest},
                {"n_batches", n_batches},
                {"seed", e.seed},
                {"term_hh", e.term_hh},
                {"term_pp", e.term_pp},
                {"term_hp", e.term_hp}};
}

json histogram_summary(const HaarComparison &c) {
    return json{{"amplitude_vs_theory", c.amplitude_vs_theory},
                {"phase_vs_theory", c.phase_vs_theory},
                {"amplitude_vs_haar_sample", c.amplitude_vs_sample},
                {"phase_vs_haar_sample", c.phase_vs_sample}};
}

}  // namespace

std::vector<std::string> cmd_build_cluster(const RunContext &ctx) {
    std::vector<std::string> unknown;
    ClusterConfig cfg;
    bool csv = true;
    {
        ObjectReader r(ctx.config, "", unknown);
        cfg = parse_cluster(r.raw("cluster"), "cluster", unknown);
        csv = r.get<bool>("csv", true);
    }
    raise_unknown(unknown);
    GaussianState s = build_cluster(cfg);
    Outputs out(ctx.out_dir);
    io::write_covariance(out.add("covariance.bin"), s);
    if (csv) {
        io::write_covariance_csv(out.add("covariance.csv"), s);
    }
    write_json(out.add("summary.json"), json{{"n_modes", s.n_modes()},
                                             {"m_bins", cfg.m_bins},
                                             {"purity_residual", s.purity_residual()},
                                             {"cluster", cluster_to_json(cfg)}});
    return out.names();
}

std::vector<std::string> cmd_condition(const RunContext &ctx) {
    std::vector<std::string> unknown;
    std::vector<MeasurementPlan> plans;
    std::vector<std::vector<double>> angle_sets;
    GaussianState state = vacuum(1);
    bool csv = true;
    {
        ObjectReader r(ctx.config, "", unknown);
        state = load_state(r, unknown);
        csv = r.get<bool>("csv", true);
        if (r.has("keep_bins")) {
            auto window = r.get<std::vector<std::size_t>>("keep_bins", {});
            if (window.size() != 2 || window[0] > window[1]) {
                throw InvalidArgument("config: keep_bins must be [first, last]");
            }
            state = with_dual_rail_labels(state);
            std::vector<std::size_t> cut;
            for (std::size_t k = 0; k < state.n_modes(); ++k) {
                std::size_t t = state.labels()[k].t;
                if (t < window[0] || t > window[1]) {
                    cut.push_back(k);
                }
            }
            state = chop(state, cut);
        }
        if (r.has("plan") == r.has("strategy")) {
            throw InvalidArgument("config: give exactly one of plan (a plan file) or strategy");
        }
        MeasurementPlan base;
        if (r.has("plan")) {
            if (r.has("thetas")) {
                throw InvalidArgument("config: thetas cannot be combined with a plan file");
            }
            base = io::read_plan(r.require<std::string>("plan"), state);
        } else {
            Strategy strategy = parse_strategy(r.raw("strategy"), "strategy", unknown);
            if (state.n_modes() % 2 != 0) {
                throw InvalidArgument("config: a strategy needs a dual-rail state");
            }
            ClusterConfig shape;
            shape.m_bins = state.n_modes() / 2;
            auto thetas = resolve_thetas(r, strategy.n_angles(shape), ctx.seed);
            base = strategy.plan(shape, thetas);
        }
        if (r.has("sweep")) {
            ObjectReader sw(r.raw("sweep"), "sweep", unknown);
            auto index = sw.require<std::size_t>("index");
            auto values = sw.require<std::vector<double>>("values");
            if (index >= base.entries.size() || values.empty()) {
                throw InvalidArgument("config: sweep.index must name a measured mode and sweep.values be non-empty");
            }
            for (double v : values) {
                MeasurementPlan p = base;
                p.entries[index].theta = v;
                plans.push_back(p);
            }
        } else {
            plans.push_back(base);
        }
    }
    raise_unknown(unknown);

    Outputs out(ctx.out_dir);
    json summary = json::array();
    for (std::size_t i = 0; i < plans.size(); ++i) {
        std::string stem = plans.size() == 1 ? "state" : "state_" + std::to_string(i);
        std::string plan_name = plans.size() == 1 ? "plan.json" : "plan_" + std::to_string(i) + ".json";
        GaussianState result = apply_plan(state, plans[i], ctx.workers);
        io::write_covariance(out.add(stem + ".bin"), result);
        if (csv) {
            io::write_covariance_csv(out.add(stem + ".csv"), result);
        }
        io::write_text(out.add(plan_name), io::plan_to_json(plans[i], state));
        json thetas = json::array();
        for (const auto &e : plans[i].entries) {
            thetas.push_back(e.theta);
        }
        summary.push_back(json{{"covariance", stem + ".bin"},
                               {"plan", plan_name},
                               {"n_modes", result.n_modes()},
                               {"purity_residual", result.purity_residual()},
                               {"thetas", thetas}});
    }
    write_json(out.add("summary.json"), json{{"input_modes", state.n_modes()}, {"results", summary}});
    return out.names();
}

std::vector<std::string> cmd_decompose(const RunContext &ctx) {
    std::vector<std::string> unknown;
    std::string state_path;
    double gate = kTol.effective_purity;
    bool check = false;
    double check_tol = 1e-8;
    {
        ObjectReader r(ctx.config, "", unknown);
        state_path = r.require<std::string>("state");
        gate = r.get<double>("purity_gate", gate);
        check = r.get<bool>("roundtrip_check", check);
        check_tol = r.get<double>("roundtrip_tol", check_tol);
    }
    raise_unknown(unknown);
    GaussianState s = io::read_covariance(state_path);
    EffectiveCircuit c = effective_circuit(s, gate);
    Outputs out(ctx.out_dir);
    write_circuit_files(out, c);
    if (check) {
        double err = (reconstruct(c).cov() - s.cov()).cwiseAbs().maxCoeff();
        write_json(out.add("roundtrip.json"), json{{"max_abs_error", err}, {"tolerance", check_tol}, {"ok", err <= check_tol}});
        if (!(err <= check_tol)) {
            std::ostringstream msg;
            msg << "decompose: roundtrip error " << err << " exceeds " << check_tol;
            throw NumericError(msg.str());
        }
    }
    return out.names();
}

std::vector<std::string> cmd_expressibility(const RunContext &ctx) {
    std::vector<std::string> unknown;
    std::vector<std::size_t> delays;
    std::vector<double> r_in;
    std::vector<std::size_t> sizes;
    std::vector<Strategy::Kind> kinds;
    KnightLayout layout;
    std::size_t bins_per_output = 2;
    std::vector<StagePhase> mask;
    DeviationSettings base;
    bool self_test = false;
    {
        ObjectReader r(ctx.config, "", unknown);
        delays = r.require<std::vector<std::size_t>>("delays");
        r_in = r.require<std::vector<double>>("r_in");
        sizes = r.require<std::vector<std::size_t>>("n_modes");
        for (const auto &name : r.get<std::vector<std::string>>("strategies", {"linear"})) {
            kinds.push_back(parse_strategy_kind(name));
        }
        if (r.has("knights")) {
            ObjectReader k(r.raw("knights"), "knights", unknown);
            layout.stride = k.get<std::size_t>("stride", layout.stride);
            layout.first_rail = parse_rail(k.get<std::string>("first_rail", "A"));
            bins_per_output = k.get<std::size_t>("bins_per_output", bins_per_output);
        }
        if (r.has("phase_mask")) {
            const json &m = r.raw("phase_mask");
            if (!m.is_array()) {
                throw InvalidArgument("config: phase_mask must be a list");
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                ObjectReader p(m[i], "phase_mask[" + std::to_string(i) + "]", unknown);
                mask.push_back({p.get<double>("rail_a", 0.0), p.get<double>("rail_b", 0.0)});
            }
        }
        if (r.has("p_test")) {
            base.p_test = parse_test_distribution(r.raw("p_test"), "p_test", unknown);
        }
        base.orders = r.get<std::vector<int>>("t", {1});
        base.n_pairs = r.get<std::size_t>("n_pairs", base.n_pairs);
        base.n_rtest = r.get<std::size_t>("n_rtest", base.n_rtest);
        base.n_batches = r.get<std::size_t>("n_batches", base.n_batches);
        self_test = r.get<bool>("self_test", false);
    }
    raise_unknown(unknown);
    if (r_in.empty() || sizes.empty() || kinds.empty()) {
        throw InvalidArgument("config: r_in, n_modes and strategies must be non-empty");
    }
    base.workers = ctx.workers;
    base.validate();

    json runs = json::array();
    std::ostringstream batches;
    batches << "n_modes,strategy,r_in,t,batch,mean\n";
    std::uint64_t run_index = 0;
    auto record = [&](std::size_t n, const std::string &name, double r, std::size_t m_bins,
                      const std::vector<DeviationEstimate> &est, std::uint64_t seed) {
        json entry{{"n_modes", n}, {"strategy", name}, {"r_in", r}, {"m_bins", m_bins}, {"seed", seed}};
        json list = json::array();
        for (const auto &e : est) {
            list.push_back(deviation_json(e, e.batch_means.size()));
            for (std::size_t b = 0; b < e.batch_means.size(); ++b) {
                batches << n << ',' << name << ',' << io::format_double(r) << ',' << e.t << ',' << b << ','
                        << io::format_double(e.batch_means[b]) << '\n';
            }
        }
        entry["estimates"] = list;
        runs.push_back(entry);
    };
    for (std::size_t n : sizes) {
        for (Strategy::Kind kind : kinds) {
            for (double r : r_in) {
                DeviationSettings s = base;
                s.seed = derive_seed(ctx.seed, {kDeviationStream, run_index++});
                ClusterConfig cfg;
                cfg.m_bins = kind == Strategy::Kind::Linear ? n : bins_per_output * n;
                cfg.delays = delays;
                cfg.squeeze_a_db = r_to_db(r);
                cfg.squeeze_b_db = r_to_db(r);
                cfg.phase_mask = mask;
                Strategy strategy;
                strategy.kind = kind;
                strategy.n_out = kind == Strategy::Kind::Knights ? n : 0;
                strategy.layout = layout;
                record(n, strategy_name(kind), r, cfg.m_bins, estimate_deviation(cfg, strategy, s), s.seed);
            }
        }
        if (self_test) {
            DeviationSettings s = base;
            s.seed = derive_seed(ctx.seed, {kDeviationStream, run_index++});
            UnitarySampler haar = [n](Rng &rng) { return sample_haar_passive(n, rng); };
            record(n, "haar", 0.0, 0, estimate_deviation(n, haar, s), s.seed);
        }
    }

    Outputs out(ctx.out_dir);
    json report{{"seed", ctx.seed}, {"config_hash", config_hash(ctx.config)}, {"runs", runs}};
    write_json(out.add("report.json"), report);
    io::write_text(out.add("batch_means.csv"), batches.str());
    return out.names();
}

std::vector<std::string> cmd_haar_run(const RunContext &ctx) {
    std::vector<std::string> unknown;
    ClusterConfig cfg;
    Strategy strategy;
    std::vector<double> thetas;
    std::size_t n_bins = 60;
    std::size_t edge_trim = 0;
    std::size_t calibration = 3;
    {
        ObjectReader r(ctx.config, "", unknown);
        cfg = parse_cluster(r.raw("cluster"), "cluster", unknown);
        if (r.has("strategy")) {
            strategy = parse_strategy(r.raw("strategy"), "strategy", unknown);
        }
        strategy.validate(cfg);
        thetas = resolve_thetas(r, strategy.n_angles(cfg), ctx.seed);
        n_bins = r.get<std::size_t>("n_bins", n_bins);
        edge_trim = r.get<std::size_t>("edge_trim", edge_trim);
        calibration = r.get<std::size_t>("calibration_samples", calibration);
    }
    raise_unknown(unknown);

    GaussianState out_state = apply_plan(build_cluster(cfg), strategy.plan(cfg, thetas), ctx.workers);
    EffectiveCircuit c = effective_circuit(out_state);
    Rng rng = make_rng(ctx.seed, {kHaarStream});
    HaarComparison cmp = compare_to_haar(c.u_eff.mat(), n_bins, rng, edge_trim);

    json report{{"seed", ctx.seed},
                {"config_hash", config_hash(ctx.config)},
                {"n_modes", c.n_modes()},
                {"n_angles", thetas.size()},
                {"n_bins", n_bins},
                {"edge_trim", edge_trim},
                {"purity_residual", c.purity_residual},
                {"r_eff_max", c.r_eff.values().maxCoeff()},
                {"r_eff_min", c.r_eff.values().minCoeff()},
                {"fidelity", histogram_summary(cmp)}};
    if (calibration > 0) {
        HaarCalibration cal =
            calibrate_haar_floor(c.n_modes(), n_bins, calibration, derive_seed(ctx.seed, {kCalibrationStream}), edge_trim);
        report["calibration"] = json{{"n_samples", cal.n_samples},
                                     {"amplitude_mean", cal.amplitude_mean},
                                     {"amplitude_min", cal.amplitude_min},
                                     {"phase_mean", cal.phase_mean},
                                     {"phase_min", cal.phase_min}};
    }

    Outputs out(ctx.out_dir);
    write_json(out.add("report.json"), report);
    io::write_histogram_csv(out.add("amplitude_hist.csv"), cmp.amplitude);
    io::write_histogram_csv(out.add("phase_hist.csv"), cmp.phase);
    io::write_histogram_csv(out.add("amplitude_theory.csv"), cmp.amplitude_theory);
    io::write_histogram_csv(out.add("phase_theory.csv"), cmp.phase_theory);
    io::write_matrix_csv(out.add("thetas.csv"), Eigen::Map<const RealVector>(thetas.data(), static_cast<Eigen::Index>(thetas.size())));
    write_circuit_files(out, c);
    return out.names();
}

}  // namespace mimsi::cli
