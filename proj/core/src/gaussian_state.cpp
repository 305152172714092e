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

#include "mimsi/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mimsi/local_ops.hpp"

namespace mimsi {

char rail_name(Rail rail) {
    return rail == Rail::A ? 'A' : 'B';
}

Rail parse_rail(std::string_view name) {
    if (name == "A" || name == "a") {
        return Rail::A;
    }
    if (name == "B" || name == "b") {
        return Rail::B;
    }
    throw InvalidArgument("unknown rail '" + std::string(name) + "' (expected A or B)");
}

std::string ModeLabel::str() const {
    return std::string(1, rail_name(rail)) + std::to_string(t);
}

double asymmetry(const RealMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

GaussianState::GaussianState(RealMatrix cov, std::vector<ModeLabel> labels)
    : n_modes_(static_cast<std::size_t>(cov.rows() / 2)), cov_(std::move(cov)), labels_(std::move(labels)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0) {
        throw InvalidArgument("covariance must be a non-empty 2N x 2N matrix, got " + std::to_string(cov_.rows()) +
                              "x" + std::to_string(cov_.cols()));
    }
    if (!cov_.allFinite()) {
        throw InvalidArgument("covariance has non-finite entries");
    }
    double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if (asymmetry(cov_) > kTol.symmetry * scale) {
        throw InvalidArgument("covariance is not symmetric");
    }
    if (!labels_.empty() && labels_.size() != n_modes_) {
        throw InvalidArgument("label count does not match mode count");
    }
}

std::optional<std::size_t> GaussianState::find(const ModeLabel &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

RealVector GaussianState::symplectic_eigenvalues() const {
    return mimsi::symplectic_eigenvalues(cov_);
}

double GaussianState::purity_residual() const {
    return (symplectic_eigenvalues().array() - 1.0).abs().maxCoeff();
}

void GaussianState::check_physical(double tol) const {
    auto n = static_cast<Eigen::Index>(n_modes_);
    ComplexMatrix h = cov_.cast<Complex>();
    h.topRightCorner(n, n).diagonal().array() += Complex(0, 1);
    h.bottomLeftCorner(n, n).diagonal().array() -= Complex(0, 1);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
    double lowest = eig.eigenvalues().minCoeff();
    if (lowest < -tol) {
        std::ostringstream msg;
        msg << "covariance violates the uncertainty principle (min eigenvalue of V + i*Omega = " << lowest << ")";
        throw InvalidArgument(msg.str());
    }
}

RealMatrix symplectic_form(std::size_t n_modes) {
    auto n = static_cast<Eigen::Index>(n_modes);
    RealMatrix omega = RealMatrix::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n).setIdentity();
    omega.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
    return omega;
}

RealVector symplectic_eigenvalues(const RealMatrix &cov) {
    // With V = L L^T, i*Omega*V is similar to L^T (i*Omega) L, whose eigenvalues
    // are +-nu_k. M = L^T Omega L is antisymmetric, so M^T M has each nu_k^2
    // twice.
    Eigen::LLT<RealMatrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericError("covariance is not positive definite");
    }
    RealMatrix l = llt.matrixL();
    auto n = cov.rows() / 2;
    RealMatrix omega_l(2 * n, 2 * n);
    omega_l.topRows(n) = l.bottomRows(n);
    omega_l.bottomRows(n) = -l.topRows(n);
    RealMatrix m = l.transpose() * omega_l;
    RealMatrix mtm = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(mtm, Eigen::EigenvaluesOnly);
    const RealVector &ev = eig.eigenvalues();
    RealVector nu(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double pair = 0.5 * (ev(2 * k) + ev(2 * k + 1));
        nu(n - 1 - k) = std::sqrt(std::max(pair, 0.0));
    }
    return nu;
}

GaussianState vacuum(std::size_t n) {
    if (n == 0) {
        throw InvalidArgument("vacuum needs at least one mode");
    }
    auto dim = static_cast<Eigen::Index>(2 * n);
    return GaussianState(RealMatrix::Identity(dim, dim));
}

double db_to_r(double squeezing_db) {
    return squeezing_db * std::numbers::ln10 / 20.0;
}

double r_to_db(double r) {
    return r * 20.0 / std::numbers::ln10;
}

GaussianState tensor(const GaussianState &a, const GaussianState &b) {
    auto na = static_cast<Eigen::Index>(a.n_modes());
    auto nb = static_cast<Eigen::Index>(b.n_modes());
    auto n = na + nb;
    RealMatrix cov = RealMatrix::Zero(2 * n, 2 * n);
    const RealMatrix &va = a.cov();
    const RealMatrix &vb = b.cov();
    // a occupies x[0,na) and p[n, n+na); b occupies x[na, n) and p[n+na, 2n).
    for (int bi = 0; bi < 2; ++bi) {
        for (int bj = 0; bj < 2; ++bj) {
            cov.block(bi * n, bj * n, na, na) = va.block(bi * na, bj * na, na, na);
            cov.block(bi * n + na, bj * n + na, nb, nb) = vb.block(bi * nb, bj * nb, nb, nb);
        }
    }
    std::vector<ModeLabel> labels;
    if (a.has_labels() && b.has_labels()) {
        labels = a.labels();
        labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    }
    return GaussianState(std::move(cov), std::move(labels));
}

GaussianState permute(const GaussianState &state, std::span<const std::size_t> sigma) {
    std::size_t n = state.n_modes();
    if (sigma.size() != n) {
        throw InvalidArgument("permutation length does not match mode count");
    }
    std::vector<bool> seen(n, false);
    for (auto s : sigma) {
        if (s >= n || seen[s]) {
            throw InvalidArgument("not a permutation");
        }
        seen[s] = true;
    }
    std::vector<Eigen::Index> idx(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        idx[k] = static_cast<Eigen::Index>(sigma[k]);
        idx[n + k] = static_cast<Eigen::Index>(n + sigma[k]);
    }
    RealMatrix cov = state.cov()(idx, idx);
    std::vector<ModeLabel> labels;
    if (state.has_labels()) {
        for (auto s : sigma) {
            labels.push_back(state.labels()[s]);
        }
    }
    return GaussianState(std::move(cov), std::move(labels));
}

GaussianState loss_channel(const GaussianState &state, std::span<const double> eta) {
    std::size_t n = state.n_modes();
    if (eta.size() != n) {
        throw InvalidArgument("loss_channel needs one efficiency per mode");
    }
    RealVector scale(2 * n);
    RealVector noise(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(eta[k] >= 0.0 && eta[k] <= 1.0)) {
            throw InvalidArgument("efficiency must lie in [0, 1]");
        }
        scale(static_cast<Eigen::Index>(k)) = scale(static_cast<Eigen::Index>(n + k)) = std::sqrt(eta[k]);
        noise(static_cast<Eigen::Index>(k)) = noise(static_cast<Eigen::Index>(n + k)) = 1.0 - eta[k];
    }
    RealMatrix cov = scale.asDiagonal() * state.cov() * scale.asDiagonal();
    cov.diagonal() += noise;
    local::symmetrize(cov);
    return GaussianState(std::move(cov), state.labels());
}

double pure_overlap_unchecked(const RealMatrix &v1, const RealMatrix &v2) {
    if (v1.rows() != v2.rows() || v1.cols() != v2.cols()) {
        throw InvalidArgument("pure_overlap: mode counts differ");
    }
    Eigen::LLT<RealMatrix> llt(v1 + v2);
    if (llt.info() != Eigen::Success) {
        throw NumericError("pure_overlap: V1 + V2 is not positive definite");
    }
    double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    double n = static_cast<double>(v1.rows() / 2);
    double value = std::exp(n * std::numbers::ln2 - 0.5 * log_det);
    return std::clamp(value, 0.0, 1.0);
}

double pure_overlap(const GaussianState &a, const GaussianState &b, double purity_tol) {
    if (a.n_modes() != b.n_modes()) {
        throw InvalidArgument("pure_overlap: mode counts differ");
    }
    if (!a.is_pure(purity_tol) || !b.is_pure(purity_tol)) {
        throw InvalidArgument("pure_overlap requires pure states");
    }
    return pure_overlap_unchecked(a.cov(), b.cov());
}

}  // namespace mimsi
