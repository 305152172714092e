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

#include <vector>

#include "mimsi/common.hpp"
#include "mimsi/gaussian_state.hpp"

namespace mimsi {

/// Phase offsets applied to every bin of each rail before a delay stage.
struct StagePhase {
    double rail_a = 0.0;
    double rail_b = 0.0;
};

/// Parameters of the two-squeezer, cascaded-delay cluster-state source.
struct ClusterConfig {
    std::size_t m_bins = 1;
    std::vector<std::size_t> delays;
    double squeeze_a_db = 0.0;  // rail A, x-squeezed
    double squeeze_b_db = 0.0;  // rail B, p-squeezed
    std::vector<StagePhase> phase_mask;  // empty, or one entry per delay
    std::vector<double> loss_eta;        // empty, or one efficiency per mode (2 * m_bins)
    double clock_tau_ns = 246.9;         // metadata only

    /// Throws InvalidArgument on any violated invariant.
    void validate() const;
    std::size_t n_modes() const { return 2 * m_bins; }
};

/// Flat mode index of (rail, t): t for rail A, m_bins + t for rail B.
std::size_t flat_index(const ModeLabel &label, std::size_t m_bins);
ModeLabel label_of(std::size_t flat, std::size_t m_bins);
std::vector<ModeLabel> dual_rail_labels(std::size_t m_bins);

/// Per bin: rail A x-squeezed, rail B p-squeezed, then a 50:50 beam splitter
/// between (A, t) and (B, t). Bins are independent.
GaussianState build_epr_rails(const ClusterConfig &config);

/// One unbalanced interferometer: the phase mask, then a 50:50 beam splitter
/// between (A, t) and (B, t - K) for every t >= K. Edge bins stay uncoupled.
GaussianState apply_delay_stage(const GaussianState &state, std::size_t delay, const StagePhase &phase = {});

/// EPR rails, every delay stage in the listed order, then the optional loss.
GaussianState build_cluster(const ClusterConfig &config);

/// Complex symmetric Z = X + iY of a pure state, with
/// V_xx = Y^{-1}, V_xp = Y^{-1} X, V_pp = X Y^{-1} X + Y.
ComplexMatrix extract_graph(const GaussianState &state, double purity_tol = kTol.purity);

/// Inverse of extract_graph.
GaussianState reconstruct_from_graph(const ComplexMatrix &z, std::vector<ModeLabel> labels = {});

/// Modes whose thresholded covariance blocks connect them (|entry| > threshold
/// in any of the xx, xp, px, pp blocks). Diagonal is false.
std::vector<std::vector<bool>> correlation_adjacency(const GaussianState &state, double threshold = 1e-6);

}  // namespace mimsi
