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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mimsi/cluster.hpp"
#include "mimsi/expressibility.hpp"

namespace mimsi::cli {

using nlohmann::json;

/// Walks a JSON object, remembering which keys were read so that leftovers
/// can be reported as unknown. Type errors become InvalidArgument with the
/// dotted path of the offending key.
class ObjectReader {
  public:
    ObjectReader(const json &j, std::string path, std::vector<std::string> &unknown);
    ~ObjectReader();
    ObjectReader(const ObjectReader &) = delete;
    ObjectReader &operator=(const ObjectReader &) = delete;

    bool has(const std::string &key) const;
    const json &raw(const std::string &key);
    std::string path_of(const std::string &key) const;

    template <typename T>
    T get(const std::string &key, T fallback) {
        if (!has(key)) {
            return fallback;
        }
        return convert<T>(key);
    }

    template <typename T>
    T require(const std::string &key) {
        if (!has(key)) {
            throw InvalidArgument("config: missing required key " + path_of(key));
        }
        return convert<T>(key);
    }

  private:
    template <typename T>
    T convert(const std::string &key) {
        try {
            return raw(key).get<T>();
        } catch (const json::exception &) {
            throw InvalidArgument("config: key " + path_of(key) + " has the wrong type");
        }
    }

    const json &j_;
    std::string path_;
    std::vector<std::string> &unknown_;
    std::vector<std::string> seen_;
};

/// Throws InvalidArgument listing every unknown key, if there are any.
void raise_unknown(const std::vector<std::string> &unknown);

ClusterConfig parse_cluster(const json &j, const std::string &path, std::vector<std::string> &unknown);
json cluster_to_json(const ClusterConfig &c);

Strategy parse_strategy(const json &j, const std::string &path, std::vector<std::string> &unknown);
Strategy::Kind parse_strategy_kind(const std::string &name);
std::string strategy_name(Strategy::Kind kind);

TestDistribution parse_test_distribution(const json &j, const std::string &path, std::vector<std::string> &unknown);

/// Built-in configurations, keyed by subcommand and preset name.
std::optional<json> preset(const std::string &subcommand, const std::string &name);
std::vector<std::string> preset_names(const std::string &subcommand);

/// FNV-1a over the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const json &config);

json load_json_file(const std::filesystem::path &path);

}  // namespace mimsi::cli
