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

#include <optional>
#include <span>
#include <vector>

#include "mimsi/common.hpp"
#include "mimsi/gaussian_state.hpp"

namespace mimsi {

struct MeasurementEntry {
    std::size_t mode = 0;
    double theta = 0.0;  // homodyne angle: measures x cos(theta) + p sin(theta)
};

/// Which modes are measured (in order, with their angles) and which are kept
/// (in output order). Indices refer to the target state's flat mode indices.
struct MeasurementPlan {
    std::vector<MeasurementEntry> entries;
    std::vector<std::size_t> outputs;

    /// Disjoint entries/outputs that together cover all `n_modes` modes, at
    /// least one output, finite angles.
    void validate(std::size_t n_modes) const;
    std::size_t n_measured() const { return entries.size(); }
};

/// Geometry of the Knight's-distance output pattern.
struct KnightLayout {
    std::size_t stride = 2;          // temporal step between consecutive outputs
    Rail first_rail = Rail::A;       // rail of the first output; rails alternate
    std::optional<std::size_t> t0;   // first output bin; centred when empty
};

/// Homodyne-measure the quadrature x cos(theta) + p sin(theta) of mode k and
/// drop the mode. The covariance of the rest does not depend on the outcome.
GaussianState homodyne_condition(const GaussianState &state, std::size_t k, double theta);

/// Sequential homodyne conditioning over plan.entries; the result holds
/// plan.outputs in that order. `workers` parallelises the rank-1 updates
/// without changing the result.
GaussianState apply_plan(const GaussianState &state, const MeasurementPlan &plan, std::size_t workers = 1);

/// Remove modes by x-basis measurement.
GaussianState chop(const GaussianState &state, std::span<const std::size_t> modes);

/// Measure every rail-A bin t with thetas[t]; output every rail-B bin.
MeasurementPlan linear_plan(std::size_t m_bins, std::span<const double> thetas);

/// Outputs alternate rails with a temporal stride, (A,t0), (B,t0+2), ...;
/// every other mode is measured, in flat-index order, with `thetas`.
MeasurementPlan knights_plan(std::size_t m_bins, std::size_t n_out, std::span<const double> thetas,
                             const KnightLayout &layout = {});

/// Number of angles knights_plan expects.
inline std::size_t knights_measured_count(std::size_t m_bins, std::size_t n_out) {
    return 2 * m_bins - n_out;
}

}  // namespace mimsi
