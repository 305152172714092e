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

#include "mimsi_cli/cli.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "mimsi/io.hpp"

namespace mimsi::cli {

namespace {

using Command = std::function<std::vector<std::string>(const RunContext &)>;

const std::map<std::string, std::pair<Command, std::string>> &commands() {
    static const std::map<std::string, std::pair<Command, std::string>> table = {
        {"build-cluster", {cmd_build_cluster, "Build a dual-rail cluster state and write its covariance"}},
        {"condition", {cmd_condition, "Apply a homodyne measurement plan to a state"}},
        {"decompose", {cmd_decompose, "Extract the effective interferometer and squeezing of a pure state"}},
        {"expressibility", {cmd_expressibility, "Estimate expressibility deviations against Haar-random optics"}},
        {"haar-run", {cmd_haar_run, "Compare an induced unitary's amplitude and phase statistics with Haar theory"}},
    };
    return table;
}

struct Options {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string out_dir = "mimsi-out";
    std::string preset;
    std::string state;
    std::string plan;
    bool roundtrip_check = false;
};

json build_config(const std::string &sub, const Options &opt, bool seed_given, std::uint64_t &seed) {
    json config = json::object();
    if (!opt.preset.empty()) {
        auto p = preset(sub, opt.preset);
        if (!p) {
            std::string names;
            for (const auto &n : preset_names(sub)) {
                names += (names.empty() ? "" : ", ") + n;
            }
            throw InvalidArgument("unknown preset '" + opt.preset + "' for " + sub +
                                  (names.empty() ? std::string(" (none defined)") : " (available: " + names + ")"));
        }
        config = *p;
    }
    if (!opt.config.empty()) {
        json file = load_json_file(opt.config);
        if (!file.is_object()) {
            throw InvalidArgument("config " + opt.config + " must hold a JSON object");
        }
        config.merge_patch(file);
    }
    if (!opt.state.empty()) {
        config["state"] = opt.state;
        config.erase("cluster");
    }
    if (!opt.plan.empty()) {
        config["plan"] = opt.plan;
        config.erase("strategy");
        config.erase("thetas");
    }
    if (opt.roundtrip_check) {
        config["roundtrip_check"] = true;
    }
    if (config.contains("seed")) {
        if (!config["seed"].is_number_unsigned()) {
            throw InvalidArgument("config: seed must be a non-negative integer");
        }
        if (!seed_given) {
            seed = config["seed"].get<std::uint64_t>();
        }
        config.erase("seed");
    }
    if (config.empty()) {
        throw InvalidArgument(sub + ": nothing to do; pass --config or --preset");
    }
    return config;
}

void write_manifest(const RunContext &ctx, const std::vector<std::string> &outputs, double seconds, int code,
                    const std::string &error) {
    json m{{"subcommand", ctx.subcommand},
           {"preset", ctx.preset.empty() ? json(nullptr) : json(ctx.preset)},
           {"config_hash", config_hash(ctx.config)},
           {"seed", ctx.seed},
           {"tool_version", kVersion},
           {"workers", ctx.workers},
           {"wall_time_seconds", seconds},
           {"outputs", outputs},
           {"status", code == kOk ? "ok" : "error"},
           {"exit_code", code}};
    if (!error.empty()) {
        m["error"] = error;
    }
    io::write_text(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"mimsi: measurement-induced multimode squeezed-light interferometer simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);
    Options opt;
    std::map<std::string, CLI::App *> subs;
    for (const auto &[name, entry] : commands()) {
        CLI::App *sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", opt.config, "JSON config file");
        sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
        sub->add_option("--workers", opt.workers, "Worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out-dir", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--preset", opt.preset, "Built-in configuration");
        if (name == "condition" || name == "decompose") {
            sub->add_option("--state", opt.state, "Covariance file to read");
        }
        if (name == "condition") {
            sub->add_option("--plan", opt.plan, "Measurement plan file");
        }
        if (name == "decompose") {
            sub->add_flag("--roundtrip-check", opt.roundtrip_check, "Re-verify the reconstruction");
        }
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    std::string sub_name;
    for (const auto &[name, sub] : subs) {
        if (sub->parsed()) {
            sub_name = name;
        }
    }
    bool seed_given = subs[sub_name]->count("--seed") > 0;

    auto start = std::chrono::steady_clock::now();
    RunContext ctx;
    ctx.subcommand = sub_name;
    ctx.workers = opt.workers;
    ctx.out_dir = opt.out_dir;
    ctx.preset = opt.preset;
    ctx.seed = opt.seed;
    std::vector<std::string> outputs;
    int code = kOk;
    std::string error;
    bool dir_ready = false;
    try {
        ctx.config = build_config(sub_name, opt, seed_given, ctx.seed);
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) {
            throw IoError("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
        }
        dir_ready = true;
        outputs = commands().at(sub_name).first(ctx);
    } catch (const InvalidArgument &e) {
        code = kConfigError;
        error = e.what();
    } catch (const NumericError &e) {
        code = kNumericError;
        error = e.what();
    } catch (const IoError &e) {
        code = kIoError;
        error = e.what();
    } catch (const std::exception &e) {
        code = kNumericError;
        error = e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (dir_ready) {
        try {
            write_manifest(ctx, outputs, seconds, code, error);
        } catch (const IoError &e) {
            if (code == kOk) {
                code = kIoError;
                error = e.what();
            }
        }
    }
    if (code != kOk) {
        err << "mimsi " << sub_name << ": " << error << "\n";
    } else {
        out << "mimsi " << sub_name << ": wrote " << outputs.size() + 1 << " files to " << ctx.out_dir.string() << "\n";
    }
    return code;
}

}  // namespace mimsi::cli
