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

#include "mimsi/symplectic.hpp"

#include <array>
#include <cmath>

#include "mimsi/local_ops.hpp"

namespace mimsi {

namespace {

Eigen::Index idx(std::size_t k) {
    return static_cast<Eigen::Index>(k);
}

double scaled_tol(const RealMatrix &m, double tol) {
    double peak = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    return tol * std::max(1.0, peak * peak);
}

}  // namespace

double symplectic_error(const RealMatrix &s) {
    auto n = s.rows() / 2;
    RealMatrix s_omega(s.rows(), s.cols());
    s_omega.leftCols(n) = -s.rightCols(n);
    s_omega.rightCols(n) = s.leftCols(n);
    RealMatrix diff = s_omega * s.transpose();
    diff.topRightCorner(n, n).diagonal().array() -= 1.0;
    diff.bottomLeftCorner(n, n).diagonal().array() += 1.0;
    return diff.cwiseAbs().maxCoeff();
}

double unitarity_error(const ComplexMatrix &u) {
    ComplexMatrix diff = u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols());
    return diff.cwiseAbs().maxCoeff();
}

double orthogonality_error(const RealMatrix &o) {
    RealMatrix diff = o.transpose() * o - RealMatrix::Identity(o.rows(), o.cols());
    return diff.cwiseAbs().maxCoeff();
}

SymplecticTransform::SymplecticTransform(RealMatrix mat, double tol) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() % 2 != 0 || mat_.rows() == 0) {
        throw InvalidArgument("symplectic transform must be a non-empty 2N x 2N matrix");
    }
    if (!mat_.allFinite()) {
        throw InvalidArgument("symplectic transform has non-finite entries");
    }
    if (symplectic_error(mat_) > scaled_tol(mat_, tol)) {
        throw InvalidArgument("matrix is not symplectic");
    }
}

SymplecticTransform SymplecticTransform::identity(std::size_t n_modes) {
    auto dim = idx(2 * n_modes);
    return make_trusted_symplectic(RealMatrix::Identity(dim, dim));
}

SymplecticTransform SymplecticTransform::operator*(const SymplecticTransform &other) const {
    if (other.mat_.rows() != mat_.rows()) {
        throw InvalidArgument("cannot compose transforms on different mode counts");
    }
    return make_trusted_symplectic(mat_ * other.mat_);
}

SymplecticTransform SymplecticTransform::inverse() const {
    // S^{-1} = -Omega S^T Omega.
    auto n = mat_.rows() / 2;
    RealMatrix st = mat_.transpose();
    RealMatrix inv(mat_.rows(), mat_.cols());
    inv.topLeftCorner(n, n) = st.bottomRightCorner(n, n);
    inv.topRightCorner(n, n) = -st.bottomLeftCorner(n, n);
    inv.bottomLeftCorner(n, n) = -st.topRightCorner(n, n);
    inv.bottomRightCorner(n, n) = st.topLeftCorner(n, n);
    return make_trusted_symplectic(std::move(inv));
}

SymplecticTransform make_trusted_symplectic(RealMatrix mat) {
    return SymplecticTransform(std::move(mat), SymplecticTransform::Trusted{});
}

PassiveUnitary::PassiveUnitary(ComplexMatrix mat, double tol) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
        throw InvalidArgument("passive unitary must be a non-empty square matrix");
    }
    if (!mat_.allFinite()) {
        throw InvalidArgument("passive unitary has non-finite entries");
    }
    if (unitarity_error(mat_) > tol) {
        throw InvalidArgument("matrix is not unitary");
    }
}

PassiveUnitary PassiveUnitary::identity(std::size_t n_modes) {
    auto n = idx(n_modes);
    return PassiveUnitary(ComplexMatrix::Identity(n, n));
}

SqueezingVector::SqueezingVector(RealVector r) : r_(std::move(r)) {
    if (!r_.allFinite()) {
        throw InvalidArgument("squeezing parameters must be finite");
    }
}

SqueezingVector::SqueezingVector(std::initializer_list<double> r)
    : SqueezingVector(RealVector(Eigen::Map<const RealVector>(r.begin(), static_cast<Eigen::Index>(r.size())))) {
}

GaussianState squeezed_vacuum(const SqueezingVector &r) {
    if (r.size() == 0) {
        throw InvalidArgument("squeezed_vacuum needs at least one mode");
    }
    auto n = idx(r.size());
    RealVector d(2 * n);
    d.head(n) = (-2.0 * r.values()).array().exp();
    d.tail(n) = (2.0 * r.values()).array().exp();
    return GaussianState(RealMatrix(d.asDiagonal()));
}

SymplecticTransform squeeze_transform(const SqueezingVector &r) {
    if (r.size() == 0) {
        throw InvalidArgument("squeeze_transform needs at least one mode");
    }
    auto n = idx(r.size());
    RealVector d(2 * n);
    d.head(n) = (-r.values()).array().exp();
    d.tail(n) = r.values().array().exp();
    return make_trusted_symplectic(RealMatrix(d.asDiagonal()));
}

Eigen::Matrix2cd beamsplitter_matrix(double transmissivity, double phase) {
    double t = std::sqrt(transmissivity);
    double rr = std::sqrt(1.0 - transmissivity);
    Complex e = std::polar(1.0, phase);
    Eigen::Matrix2cd u;
    u << t, e * rr, -std::conj(e) * rr, t;
    return u;
}

SymplecticTransform beamsplitter(std::size_t n, std::size_t i, std::size_t j, double transmissivity,
                                 double phase) {
    if (i >= n || j >= n) {
        throw InvalidArgument("beamsplitter mode index out of range");
    }
    if (i == j) {
        throw InvalidArgument("beamsplitter needs two distinct modes");
    }
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw InvalidArgument("transmissivity must lie in [0, 1]");
    }
    auto dim = idx(2 * n);
    RealMatrix s = RealMatrix::Identity(dim, dim);
    Eigen::Matrix2cd u = beamsplitter_matrix(transmissivity, phase);
    std::array<Eigen::Index, 4> q = {idx(i), idx(j), idx(n + i), idx(n + j)};
    Eigen::Matrix4d o;
    o << u.real(), -u.imag(), u.imag(), u.real();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            s(q[r], q[c]) = o(r, c);
        }
    }
    return make_trusted_symplectic(std::move(s));
}

SymplecticTransform phase_shift(std::size_t n, std::size_t i, double phi) {
    if (i >= n) {
        throw InvalidArgument("phase_shift mode index out of range");
    }
    auto dim = idx(2 * n);
    RealMatrix s = RealMatrix::Identity(dim, dim);
    double c = std::cos(phi);
    double sn = std::sin(phi);
    s(idx(i), idx(i)) = c;
    s(idx(i), idx(n + i)) = -sn;
    s(idx(n + i), idx(i)) = sn;
    s(idx(n + i), idx(n + i)) = c;
    return make_trusted_symplectic(std::move(s));
}

SymplecticTransform passive_to_symplectic(const PassiveUnitary &u) {
    auto n = idx(u.n_modes());
    RealMatrix o(2 * n, 2 * n);
    o.topLeftCorner(n, n) = u.mat().real();
    o.topRightCorner(n, n) = -u.mat().imag();
    o.bottomLeftCorner(n, n) = u.mat().imag();
    o.bottomRightCorner(n, n) = u.mat().real();
    return make_trusted_symplectic(std::move(o));
}

PassiveUnitary symplectic_to_passive(const SymplecticTransform &o, double tol) {
    const RealMatrix &m = o.mat();
    auto n = m.rows() / 2;
    if (orthogonality_error(m) > tol) {
        throw InvalidArgument("symplectic_to_passive: transform is not orthogonal");
    }
    RealMatrix a = m.topLeftCorner(n, n);
    RealMatrix b = m.bottomLeftCorner(n, n);
    double block = std::max((m.bottomRightCorner(n, n) - a).cwiseAbs().maxCoeff(),
                            (m.topRightCorner(n, n) + b).cwiseAbs().maxCoeff());
    if (block > tol) {
        throw InvalidArgument("symplectic_to_passive: transform lacks the passive block structure");
    }
    ComplexMatrix u(n, n);
    u.real() = 0.5 * (a + m.bottomRightCorner(n, n));
    u.imag() = 0.5 * (b - m.topRightCorner(n, n));
    return PassiveUnitary(std::move(u), std::max(tol, kTol.unitary));
}

GaussianState apply(const SymplecticTransform &s, const GaussianState &state) {
    if (s.n_modes() != state.n_modes()) {
        throw InvalidArgument("apply: transform and state have different mode counts");
    }
    RealMatrix cov = s.mat() * state.cov() * s.mat().transpose();
    local::symmetrize(cov);
    return GaussianState(std::move(cov), state.labels());
}

namespace local {

void apply_two_mode_passive(RealMatrix &cov, std::size_t i, std::size_t j, const Eigen::Matrix2cd &u) {
    auto n = static_cast<std::size_t>(cov.rows() / 2);
    std::array<Eigen::Index, 4> q = {idx(i), idx(j), idx(n + i), idx(n + j)};
    Eigen::Matrix4d o;
    o << u.real(), -u.imag(), u.imag(), u.real();
    Eigen::Matrix<double, 4, Eigen::Dynamic> rows(4, cov.cols());
    for (int r = 0; r < 4; ++r) {
        rows.row(r) = cov.row(q[r]);
    }
    rows = o * rows;
    for (int r = 0; r < 4; ++r) {
        cov.row(q[r]) = rows.row(r);
    }
    Eigen::Matrix<double, Eigen::Dynamic, 4> cols(cov.rows(), 4);
    for (int c = 0; c < 4; ++c) {
        cols.col(c) = cov.col(q[c]);
    }
    cols = cols * o.transpose();
    for (int c = 0; c < 4; ++c) {
        cov.col(q[c]) = cols.col(c);
    }
}

void apply_phase(RealMatrix &cov, std::size_t i, double phi) {
    auto n = static_cast<std::size_t>(cov.rows() / 2);
    Eigen::Index x = idx(i);
    Eigen::Index p = idx(n + i);
    double c = std::cos(phi);
    double s = std::sin(phi);
    RealVector rx = cov.row(x);
    RealVector rp = cov.row(p);
    cov.row(x) = c * rx - s * rp;
    cov.row(p) = s * rx + c * rp;
    RealVector cx = cov.col(x);
    RealVector cp = cov.col(p);
    cov.col(x) = c * cx - s * cp;
    cov.col(p) = s * cx + c * cp;
}

void symmetrize(RealMatrix &cov) {
    RealMatrix t = cov.transpose();
    cov = 0.5 * (cov + t);
}

}  // namespace local

}  // namespace mimsi
