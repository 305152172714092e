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

#include "mimsi/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mimsi/local_ops.hpp"

namespace mimsi {

namespace {

constexpr double kClusterRelTol = 1e-8;
constexpr double kNegligibleSqueezing = 1e-14;

// Orthonormalise the columns in order; a column that collapses is replaced by
// the first unit vector that is still independent of the previous ones.
void orthonormalize_columns(ComplexMatrix &q) {
    auto m = q.cols();
    for (Eigen::Index k = 0; k < m; ++k) {
        auto project_out = [&](ComplexVector v) {
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    v -= q.col(j) * q.col(j).dot(v);
                }
            }
            return v;
        };
        ComplexVector v = project_out(q.col(k));
        for (Eigen::Index e = 0; v.norm() < 0.5 && e < m; ++e) {
            v = project_out(ComplexVector::Unit(m, e));
        }
        q.col(k) = v / v.norm();
    }
}

// Q unitary with B = Q diag(sigma) Q^T for complex symmetric B. Eigenvectors
// (x; y) of [[Re B, Im B], [Im B, -Re B]] with eigenvalue sigma >= 0 give
// Takagi vectors x + iy; this handles repeated singular values directly.
ComplexMatrix takagi_block(const ComplexMatrix &b) {
    auto m = b.rows();
    RealMatrix h(2 * m, 2 * m);
    h.topLeftCorner(m, m) = b.real();
    h.topRightCorner(m, m) = b.imag();
    h.bottomLeftCorner(m, m) = b.imag();
    h.bottomRightCorner(m, m) = -b.real();
    local::symmetrize(h);
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw NumericError("Takagi factorisation failed to converge");
    }
    ComplexMatrix q(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        auto col = eig.eigenvectors().col(2 * m - 1 - k);
        q.col(k).real() = col.head(m);
        q.col(k).imag() = col.tail(m);
    }
    orthonormalize_columns(q);
    return q;
}

RealMatrix passive_block(const ComplexMatrix &u) {
    auto n = u.rows();
    RealMatrix o(2 * n, 2 * n);
    o.topLeftCorner(n, n) = u.real();
    o.topRightCorner(n, n) = -u.imag();
    o.bottomLeftCorner(n, n) = u.imag();
    o.bottomRightCorner(n, n) = u.real();
    return o;
}

// Nearest unitary in the Frobenius norm.
ComplexMatrix unitary_projection(const ComplexMatrix &a) {
    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

bool amplitude_pattern_greater(const ComplexMatrix &u, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < u.rows(); ++j) {
        double x = std::abs(u(j, a));
        double y = std::abs(u(j, b));
        if (std::abs(x - y) > 1e-12) {
            return x > y;
        }
    }
    return false;
}

}  // namespace

WilliamsonResult williamson(const RealMatrix &cov) {
    if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0) {
        throw InvalidArgument("williamson: expected a non-empty 2N x 2N matrix");
    }
    double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if (asymmetry(cov) > kTol.symmetry * scale) {
        throw InvalidArgument("williamson: matrix is not symmetric");
    }
    auto n = cov.rows() / 2;
    RealMatrix v = cov;
    local::symmetrize(v);

    Eigen::SelfAdjointEigenSolver<RealMatrix> sym(v);
    if (sym.info() != Eigen::Success || sym.eigenvalues().minCoeff() <= 0.0) {
        throw NumericError("williamson: covariance is not positive definite");
    }
    RealVector root = sym.eigenvalues().cwiseSqrt();
    const RealMatrix &e = sym.eigenvectors();
    RealMatrix v_half = e * root.asDiagonal() * e.transpose();
    RealMatrix v_inv_half = e * root.cwiseInverse().asDiagonal() * e.transpose();

    // A = V^{-1/2} Omega V^{-1/2} is antisymmetric; iA is Hermitian with
    // eigenvalues +-1/nu_k.
    RealMatrix omega_vih(2 * n, 2 * n);
    omega_vih.topRows(n) = v_inv_half.bottomRows(n);
    omega_vih.bottomRows(n) = -v_inv_half.topRows(n);
    RealMatrix a = v_inv_half * omega_vih;
    a = 0.5 * (a - a.transpose()).eval();
    ComplexMatrix ia(2 * n, 2 * n);
    ia.real().setZero();
    ia.imag() = a;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> herm(ia);
    if (herm.info() != Eigen::Success) {
        throw NumericError("williamson: eigensolver failed to converge");
    }

    // Positive eigenvalues come last, ascending in 1/nu, i.e. nu descending.
    // For eigenvector w = u + iv: A u = a v, A v = -a u, and the real basis
    // K = sqrt(2) [u, -v] brings A to [[0, a], [-a, 0]].
    RealMatrix k(2 * n, 2 * n);
    RealVector inv_nu(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double lambda = herm.eigenvalues()(n + j);
        if (lambda <= 0.0) {
            throw NumericError("williamson: degenerate symplectic spectrum");
        }
        inv_nu(j) = lambda;
        auto w = herm.eigenvectors().col(n + j);
        k.col(j) = std::sqrt(2.0) * w.real();
        k.col(n + j) = -std::sqrt(2.0) * w.imag();
    }
    RealVector nu = inv_nu.cwiseInverse();
    if (nu.minCoeff() < 1.0 - 1e-7) {
        std::ostringstream msg;
        msg << "williamson: symplectic eigenvalue " << nu.minCoeff() << " < 1 violates the uncertainty principle";
        throw NumericError(msg.str());
    }
    RealVector col_scale(2 * n);
    col_scale << inv_nu.cwiseSqrt(), inv_nu.cwiseSqrt();
    RealMatrix s = v_half * k * col_scale.asDiagonal();
    return {make_trusted_symplectic(std::move(s)), std::move(nu)};
}

PassiveSqueezeSplit split_positive_symplectic(const RealMatrix &p) {
    auto n = p.rows() / 2;
    if ((p - RealMatrix::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff() < kNegligibleSqueezing * 100) {
        return {ComplexMatrix::Identity(n, n), RealVector::Zero(n)};
    }
    RealMatrix xx = p.topLeftCorner(n, n);
    RealMatrix xp = p.topRightCorner(n, n);
    RealMatrix px = p.bottomLeftCorner(n, n);
    RealMatrix pp = p.bottomRightCorner(n, n);

    // Complex-linear part G = U cosh(2r) U^dag and antilinear part
    // W = -U sinh(2r) U^T of the map z -> P z on z = x + ip.
    ComplexMatrix g(n, n);
    g.real() = 0.5 * (xx + pp);
    g.imag() = 0.5 * (px - xp);
    g = 0.5 * (g + g.adjoint()).eval();
    ComplexMatrix w(n, n);
    w.real() = 0.5 * (xx - pp);
    w.imag() = 0.5 * (px + xp);
    w = 0.5 * (w + w.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g);
    if (eig.info() != Eigen::Success) {
        throw NumericError("bloch_messiah: eigensolver failed to converge");
    }
    RealVector lam = eig.eigenvalues().reverse();
    ComplexMatrix u0 = eig.eigenvectors().rowwise().reverse();

    // Within each cluster of equal cosh(2r) the eigenvectors are only fixed
    // up to a unitary; a Takagi factorisation of the antilinear part there
    // picks the one that makes U^dag (-W) conj(U) real diagonal.
    ComplexMatrix t = u0.adjoint() * (-w) * u0.conjugate();
    ComplexMatrix q = ComplexMatrix::Zero(n, n);
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && lam(end - 1) - lam(end) <= kClusterRelTol * std::max(1.0, lam(start))) {
            ++end;
        }
        Eigen::Index m = end - start;
        ComplexMatrix block = t.block(start, start, m, m);
        if (block.cwiseAbs().maxCoeff() < kNegligibleSqueezing) {
            q.block(start, start, m, m).setIdentity();
        } else if (m == 1) {
            q(start, start) = std::polar(1.0, 0.5 * std::arg(block(0, 0)));
        } else {
            q.block(start, start, m, m) = takagi_block(0.5 * (block + block.transpose()));
        }
        start = end;
    }
    ComplexMatrix u = u0 * q;
    ComplexVector d = (u.adjoint() * (-w) * u.conjugate()).diagonal();
    RealVector r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        r(k) = 0.5 * std::asinh(std::max(d(k).real(), 0.0));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return r(a) > r(b); });
    PassiveSqueezeSplit out{ComplexMatrix(n, n), RealVector(n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.u.col(k) = u.col(order[static_cast<std::size_t>(k)]);
        out.r(k) = r(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

void canonicalize_gauge(ComplexMatrix &u, RealVector &r, double degeneracy) {
    auto n = u.cols();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return r(a) > r(b); });
    auto group_start = order.begin();
    while (group_start != order.end()) {
        auto group_end = group_start + 1;
        while (group_end != order.end() && r(*(group_end - 1)) - r(*group_end) < degeneracy) {
            ++group_end;
        }
        std::stable_sort(group_start, group_end,
                         [&](Eigen::Index a, Eigen::Index b) { return amplitude_pattern_greater(u, a, b); });
        group_start = group_end;
    }
    ComplexMatrix sorted(u.rows(), n);
    RealVector sorted_r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        sorted.col(k) = u.col(order[static_cast<std::size_t>(k)]);
        sorted_r(k) = r(order[static_cast<std::size_t>(k)]);
    }

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index lead = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < sorted.rows(); ++j) {
            double a = std::abs(sorted(j, k));
            if (a > best + 1e-12) {
                best = a;
                lead = j;
            }
        }
        Complex z = sorted(lead, k);
        if (std::abs(sorted_r(k)) < degeneracy) {
            // An unsqueezed column may carry any phase.
            if (std::abs(z) > 0.0) {
                sorted.col(k) *= std::conj(z) / std::abs(z);
            }
        } else {
            // A squeezed column only admits a sign.
            bool negative = std::abs(z.real()) > 1e-12 ? z.real() < 0.0 : z.imag() < 0.0;
            if (negative) {
                sorted.col(k) = -sorted.col(k);
            }
        }
    }
    u = std::move(sorted);
    r = std::move(sorted_r);
}

BlochMessiahResult bloch_messiah(const SymplecticTransform &s) {
    const RealMatrix &m = s.mat();
    auto n = m.rows() / 2;
    RealMatrix sst = m * m.transpose();
    local::symmetrize(sst);
    PassiveSqueezeSplit split = split_positive_symplectic(sst);
    canonicalize_gauge(split.u, split.r);

    RealMatrix o1 = passive_block(split.u);
    RealVector d_inv(2 * n);
    d_inv << split.r.array().exp().matrix(), (-split.r).array().exp().matrix();
    RealMatrix o2_raw = d_inv.asDiagonal() * o1.transpose() * m;
    ComplexMatrix u2(n, n);
    u2.real() = 0.5 * (o2_raw.topLeftCorner(n, n) + o2_raw.bottomRightCorner(n, n));
    u2.imag() = 0.5 * (o2_raw.bottomLeftCorner(n, n) - o2_raw.topRightCorner(n, n));
    RealMatrix o2 = passive_block(unitary_projection(u2));
    return {make_trusted_symplectic(std::move(o1)), std::move(split.r), make_trusted_symplectic(std::move(o2))};
}

EffectiveCircuit effective_circuit(const GaussianState &state, double purity_gate) {
    WilliamsonResult w = williamson(state.cov());
    double residual = (w.nu.array() - 1.0).abs().maxCoeff();
    if (residual > purity_gate) {
        std::ostringstream msg;
        msg << "effective_circuit: state is not pure enough (purity residual " << residual << " > " << purity_gate
            << ")";
        throw NumericError(msg.str());
    }
    BlochMessiahResult bm = bloch_messiah(w.s);
    PassiveUnitary u = symplectic_to_passive(bm.o1);
    return {std::move(u), SqueezingVector(std::move(bm.r)), residual};
}

GaussianState reconstruct(const EffectiveCircuit &circuit) {
    auto n = static_cast<Eigen::Index>(circuit.n_modes());
    RealMatrix o = passive_block(circuit.u_eff.mat());
    RealVector d(2 * n);
    d << (-2.0 * circuit.r_eff.values()).array().exp().matrix(), (2.0 * circuit.r_eff.values()).array().exp().matrix();
    RealMatrix cov = o * d.asDiagonal() * o.transpose();
    local::symmetrize(cov);
    return GaussianState(std::move(cov));
}

}  // namespace mimsi
