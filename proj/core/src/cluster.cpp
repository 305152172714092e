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

#include "mimsi/cluster.hpp"

#include <cmath>
#include <numbers>

#include "mimsi/local_ops.hpp"
#include "mimsi/symplectic.hpp"

namespace mimsi {

namespace {

const Eigen::Matrix2cd &balanced_splitter() {
    static const Eigen::Matrix2cd u = beamsplitter_matrix(0.5, 0.0);
    return u;
}

}  // namespace

void ClusterConfig::validate() const {
    if (m_bins == 0) {
        throw InvalidArgument("cluster: m_bins must be positive");
    }
    for (auto k : delays) {
        if (k == 0) {
            throw InvalidArgument("cluster: delays must be positive");
        }
        if (k >= m_bins) {
            throw InvalidArgument("cluster: delay " + std::to_string(k) + " is not smaller than m_bins = " +
                                  std::to_string(m_bins));
        }
    }
    if (!std::isfinite(squeeze_a_db) || !std::isfinite(squeeze_b_db)) {
        throw InvalidArgument("cluster: squeezing must be finite");
    }
    if (!phase_mask.empty() && phase_mask.size() != delays.size()) {
        throw InvalidArgument("cluster: phase_mask needs one entry per delay stage");
    }
    for (const auto &p : phase_mask) {
        if (!std::isfinite(p.rail_a) || !std::isfinite(p.rail_b)) {
            throw InvalidArgument("cluster: phase offsets must be finite");
        }
    }
    if (!loss_eta.empty()) {
        if (loss_eta.size() != n_modes()) {
            throw InvalidArgument("cluster: loss_eta needs one efficiency per mode (2 * m_bins)");
        }
        for (double eta : loss_eta) {
            if (!(eta > 0.0 && eta <= 1.0)) {
                throw InvalidArgument("cluster: loss efficiencies must lie in (0, 1]");
            }
        }
    }
}

std::size_t flat_index(const ModeLabel &label, std::size_t m_bins) {
    if (label.t >= m_bins) {
        throw InvalidArgument("time bin " + std::to_string(label.t) + " out of range");
    }
    return label.rail == Rail::A ? label.t : m_bins + label.t;
}

ModeLabel label_of(std::size_t flat, std::size_t m_bins) {
    if (flat >= 2 * m_bins) {
        throw InvalidArgument("flat mode index out of range");
    }
    return flat < m_bins ? ModeLabel{Rail::A, flat} : ModeLabel{Rail::B, flat - m_bins};
}

std::vector<ModeLabel> dual_rail_labels(std::size_t m_bins) {
    std::vector<ModeLabel> labels;
    labels.reserve(2 * m_bins);
    for (std::size_t k = 0; k < 2 * m_bins; ++k) {
        labels.push_back(label_of(k, m_bins));
    }
    return labels;
}

GaussianState build_epr_rails(const ClusterConfig &config) {
    if (config.m_bins == 0) {
        throw InvalidArgument("cluster: m_bins must be positive");
    }
    auto m = static_cast<Eigen::Index>(config.m_bins);
    double ra = db_to_r(config.squeeze_a_db);
    double rb = db_to_r(config.squeeze_b_db);
    RealVector d(4 * m);
    d.segment(0, m).setConstant(std::exp(-2.0 * ra));
    d.segment(m, m).setConstant(std::exp(2.0 * rb));
    d.segment(2 * m, m).setConstant(std::exp(2.0 * ra));
    d.segment(3 * m, m).setConstant(std::exp(-2.0 * rb));
    RealMatrix cov = d.asDiagonal();
    for (std::size_t t = 0; t < config.m_bins; ++t) {
        local::apply_two_mode_passive(cov, t, config.m_bins + t, balanced_splitter());
    }
    local::symmetrize(cov);
    return GaussianState(std::move(cov), dual_rail_labels(config.m_bins));
}

GaussianState apply_delay_stage(const GaussianState &state, std::size_t delay, const StagePhase &phase) {
    std::size_t m = state.n_modes() / 2;
    if (state.n_modes() % 2 != 0) {
        throw InvalidArgument("delay stage needs a dual-rail state");
    }
    if (delay == 0 || delay >= m) {
        throw InvalidArgument("delay " + std::to_string(delay) + " must lie in [1, m_bins = " + std::to_string(m) +
                              ")");
    }
    RealMatrix cov = state.cov();
    if (phase.rail_a != 0.0 || phase.rail_b != 0.0) {
        for (std::size_t t = 0; t < m; ++t) {
            if (phase.rail_a != 0.0) {
                local::apply_phase(cov, t, phase.rail_a);
            }
            if (phase.rail_b != 0.0) {
                local::apply_phase(cov, m + t, phase.rail_b);
            }
        }
    }
    for (std::size_t t = delay; t < m; ++t) {
        local::apply_two_mode_passive(cov, t, m + t - delay, balanced_splitter());
    }
    local::symmetrize(cov);
    return GaussianState(std::move(cov), state.labels());
}

GaussianState build_cluster(const ClusterConfig &config) {
    config.validate();
    GaussianState state = build_epr_rails(config);
    for (std::size_t s = 0; s < config.delays.size(); ++s) {
        StagePhase phase = config.phase_mask.empty() ? StagePhase{} : config.phase_mask[s];
        state = apply_delay_stage(state, config.delays[s], phase);
    }
    if (!config.loss_eta.empty()) {
        state = loss_channel(state, config.loss_eta);
    }
    return state;
}

ComplexMatrix extract_graph(const GaussianState &state, double purity_tol) {
    if (!state.is_pure(purity_tol)) {
        throw InvalidArgument("extract_graph requires a pure state");
    }
    auto n = static_cast<Eigen::Index>(state.n_modes());
    const RealMatrix &v = state.cov();
    RealMatrix vxx = v.topLeftCorner(n, n);
    Eigen::LLT<RealMatrix> llt(vxx);
    if (llt.info() != Eigen::Success) {
        throw NumericError("extract_graph: V_xx is not positive definite");
    }
    RealMatrix y = llt.solve(RealMatrix::Identity(n, n));
    RealMatrix x = y * v.topRightCorner(n, n);
    ComplexMatrix z(n, n);
    z.real() = 0.5 * (x + x.transpose());
    z.imag() = 0.5 * (y + y.transpose());
    return z;
}

GaussianState reconstruct_from_graph(const ComplexMatrix &z, std::vector<ModeLabel> labels) {
    if (z.rows() != z.cols() || z.rows() == 0) {
        throw InvalidArgument("graph matrix must be square and non-empty");
    }
    auto n = z.rows();
    RealMatrix x = z.real();
    RealMatrix y = z.imag();
    Eigen::LLT<RealMatrix> llt(y);
    if (llt.info() != Eigen::Success) {
        throw InvalidArgument("graph matrix must have a positive-definite imaginary part");
    }
    RealMatrix y_inv = llt.solve(RealMatrix::Identity(n, n));
    RealMatrix cov(2 * n, 2 * n);
    cov.topLeftCorner(n, n) = y_inv;
    cov.topRightCorner(n, n) = y_inv * x;
    cov.bottomLeftCorner(n, n) = x * y_inv;
    cov.bottomRightCorner(n, n) = x * y_inv * x + y;
    local::symmetrize(cov);
    return GaussianState(std::move(cov), std::move(labels));
}

std::vector<std::vector<bool>> correlation_adjacency(const GaussianState &state, double threshold) {
    std::size_t n = state.n_modes();
    const RealMatrix &v = state.cov();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    auto in = static_cast<Eigen::Index>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            auto a = static_cast<Eigen::Index>(i);
            auto b = static_cast<Eigen::Index>(j);
            double peak = std::max({std::abs(v(a, b)), std::abs(v(a, in + b)), std::abs(v(in + a, b)),
                                    std::abs(v(in + a, in + b))});
            adj[i][j] = peak > threshold;
        }
    }
    return adj;
}

}  // namespace mimsi
