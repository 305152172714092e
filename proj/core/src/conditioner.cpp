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

#include "mimsi/conditioner.hpp"

#include <cmath>
#include <numeric>

#include "mimsi/cluster.hpp"
#include "mimsi/local_ops.hpp"
#include "mimsi/parallel.hpp"

namespace mimsi {

void MeasurementPlan::validate(std::size_t n_modes) const {
    std::vector<int> seen(n_modes, 0);
    for (const auto &e : entries) {
        if (e.mode >= n_modes) {
            throw InvalidArgument("plan: measured mode " + std::to_string(e.mode) + " out of range");
        }
        if (!std::isfinite(e.theta)) {
            throw InvalidArgument("plan: non-finite homodyne angle");
        }
        if (seen[e.mode]++) {
            throw InvalidArgument("plan: mode " + std::to_string(e.mode) + " listed twice");
        }
    }
    if (outputs.empty()) {
        throw InvalidArgument("plan: no output modes remain");
    }
    for (auto k : outputs) {
        if (k >= n_modes) {
            throw InvalidArgument("plan: output mode " + std::to_string(k) + " out of range");
        }
        if (seen[k]++) {
            throw InvalidArgument("plan: mode " + std::to_string(k) + " is both measured and output, or repeated");
        }
    }
    for (std::size_t k = 0; k < n_modes; ++k) {
        if (!seen[k]) {
            throw InvalidArgument("plan: mode " + std::to_string(k) + " is neither measured nor output");
        }
    }
}

GaussianState apply_plan(const GaussianState &state, const MeasurementPlan &plan, std::size_t workers) {
    std::size_t n = state.n_modes();
    plan.validate(n);
    RealMatrix v = state.cov();
    auto dim = v.cols();
    constexpr Eigen::Index kBlock = 64;
    Eigen::Index n_blocks = (dim + kBlock - 1) / kBlock;
    RealVector u(dim);

    for (const auto &entry : plan.entries) {
        auto k = static_cast<Eigen::Index>(entry.mode);
        if (entry.theta != 0.0) {
            local::apply_phase(v, entry.mode, -entry.theta);
        }
        double var = v(k, k);
        if (var < kTol.pinv_threshold) {
            continue;
        }
        // Schur complement on the x-quadrature of mode k. Rows and columns of
        // modes already removed are updated too; they are never read again.
        u = v.col(k);
        double inv = 1.0 / var;
        parallel_for(static_cast<std::size_t>(n_blocks), workers, [&](std::size_t b) {
            Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlock;
            Eigen::Index end = std::min(dim, begin + kBlock);
            for (Eigen::Index j = begin; j < end; ++j) {
                double f = u(j) * inv;
                if (f != 0.0) {
                    v.col(j) -= f * u;
                }
            }
        });
    }

    auto out = plan.outputs.size();
    std::vector<Eigen::Index> idx(2 * out);
    std::vector<ModeLabel> labels;
    for (std::size_t k = 0; k < out; ++k) {
        idx[k] = static_cast<Eigen::Index>(plan.outputs[k]);
        idx[out + k] = static_cast<Eigen::Index>(n + plan.outputs[k]);
        if (state.has_labels()) {
            labels.push_back(state.labels()[plan.outputs[k]]);
        }
    }
    RealMatrix reduced = v(idx, idx);
    local::symmetrize(reduced);
    return GaussianState(std::move(reduced), std::move(labels));
}

GaussianState homodyne_condition(const GaussianState &state, std::size_t k, double theta) {
    if (k >= state.n_modes()) {
        throw InvalidArgument("homodyne_condition: mode " + std::to_string(k) + " out of range");
    }
    MeasurementPlan plan;
    plan.entries.push_back({k, theta});
    for (std::size_t j = 0; j < state.n_modes(); ++j) {
        if (j != k) {
            plan.outputs.push_back(j);
        }
    }
    return apply_plan(state, plan);
}

GaussianState chop(const GaussianState &state, std::span<const std::size_t> modes) {
    std::size_t n = state.n_modes();
    std::vector<bool> removed(n, false);
    MeasurementPlan plan;
    for (auto k : modes) {
        if (k >= n) {
            throw InvalidArgument("chop: mode " + std::to_string(k) + " out of range");
        }
        if (removed[k]) {
            throw InvalidArgument("chop: mode " + std::to_string(k) + " listed twice");
        }
        removed[k] = true;
        plan.entries.push_back({k, 0.0});
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!removed[k]) {
            plan.outputs.push_back(k);
        }
    }
    if (plan.outputs.empty()) {
        throw InvalidArgument("chop: cannot remove every mode");
    }
    return apply_plan(state, plan);
}

MeasurementPlan linear_plan(std::size_t m_bins, std::span<const double> thetas) {
    if (m_bins == 0) {
        throw InvalidArgument("linear_plan: m_bins must be positive");
    }
    if (thetas.size() != m_bins) {
        throw InvalidArgument("linear_plan: expected " + std::to_string(m_bins) + " angles, got " +
                              std::to_string(thetas.size()));
    }
    MeasurementPlan plan;
    for (std::size_t t = 0; t < m_bins; ++t) {
        plan.entries.push_back({flat_index({Rail::A, t}, m_bins), thetas[t]});
        plan.outputs.push_back(flat_index({Rail::B, t}, m_bins));
    }
    return plan;
}

MeasurementPlan knights_plan(std::size_t m_bins, std::size_t n_out, std::span<const double> thetas,
                             const KnightLayout &layout) {
    if (n_out == 0) {
        throw InvalidArgument("knights_plan: n_out must be positive");
    }
    if (layout.stride == 0) {
        throw InvalidArgument("knights_plan: stride must be positive");
    }
    std::size_t span = layout.stride * (n_out - 1) + 1;
    if (span > m_bins) {
        throw InvalidArgument("knights_plan: " + std::to_string(n_out) + " outputs with stride " +
                              std::to_string(layout.stride) + " need " + std::to_string(span) +
                              " bins, only " + std::to_string(m_bins) + " available");
    }
    std::size_t t0 = layout.t0.value_or((m_bins - span + 1) / 2);
    if (t0 + span > m_bins) {
        throw InvalidArgument("knights_plan: pattern anchored at t0 = " + std::to_string(t0) + " exceeds m_bins");
    }
    std::size_t expected = knights_measured_count(m_bins, n_out);
    if (thetas.size() != expected) {
        throw InvalidArgument("knights_plan: expected " + std::to_string(expected) + " angles, got " +
                              std::to_string(thetas.size()));
    }
    MeasurementPlan plan;
    std::vector<bool> is_output(2 * m_bins, false);
    for (std::size_t k = 0; k < n_out; ++k) {
        bool flip = (k % 2) == 1;
        Rail rail = (layout.first_rail == Rail::A) != flip ? Rail::A : Rail::B;
        std::size_t flat = flat_index({rail, t0 + layout.stride * k}, m_bins);
        plan.outputs.push_back(flat);
        is_output[flat] = true;
    }
    std::size_t next = 0;
    for (std::size_t flat = 0; flat < 2 * m_bins; ++flat) {
        if (!is_output[flat]) {
            plan.entries.push_back({flat, thetas[next++]});
        }
    }
    return plan;
}

}  // namespace mimsi
