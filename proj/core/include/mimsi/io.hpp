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

#include <filesystem>
#include <string>
#include <vector>

#include "mimsi/common.hpp"
#include "mimsi/conditioner.hpp"
#include "mimsi/decomposer.hpp"
#include "mimsi/gaussian_state.hpp"
#include "mimsi/haar_stats.hpp"

namespace mimsi::io {

namespace fs = std::filesystem;

/// Covariance file: one JSON header line (n_modes, ordering, hbar, labels,
/// squeezing convention), a newline, then the 2N x 2N matrix as row-major
/// little-endian float64.
void write_covariance(const fs::path &path, const GaussianState &state);
GaussianState read_covariance(const fs::path &path);

/// Header line alone, for tools that only need the metadata.
std::string covariance_header(const GaussianState &state);

/// Plain CSV of the covariance, one matrix row per line.
void write_covariance_csv(const fs::path &path, const GaussianState &state);

/// Plan file: either a JSON list of {"rail", "t", "theta"} records (outputs are
/// then all remaining modes in flat order), or an object {"measure": [...],
/// "outputs": [{"rail", "t"}, ...]}. Labels are resolved against the state's
/// labels, or against the dual-rail layout when the state carries none.
MeasurementPlan parse_plan(const std::string &text, const GaussianState &state);
MeasurementPlan read_plan(const fs::path &path, const GaussianState &state);
std::string plan_to_json(const MeasurementPlan &plan, const GaussianState &state);

std::string circuit_to_json(const EffectiveCircuit &circuit);
EffectiveCircuit circuit_from_json(const std::string &text);

/// CSV matrix with 17 significant digits.
void write_matrix_csv(const fs::path &path, const RealMatrix &m);

/// bin_left,bin_right,frequency
void write_histogram_csv(const fs::path &path, const HistogramReport &h);

std::string read_text(const fs::path &path);
void write_text(const fs::path &path, const std::string &text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace mimsi::io
