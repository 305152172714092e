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

#include <span>

#include "mimsi/common.hpp"
#include "mimsi/gaussian_state.hpp"

namespace mimsi {

/// Real 2N x 2N matrix with S Omega S^T = Omega.
class SymplecticTransform {
   public:
    /// Checks the symplectic condition; the tolerance is scaled by
    /// max(1, max|S|^2) so strongly squeezing transforms are not rejected for
    /// rounding alone.
    explicit SymplecticTransform(RealMatrix mat, double tol = kTol.symplectic);

    static SymplecticTransform identity(std::size_t n_modes);

    std::size_t n_modes() const { return static_cast<std::size_t>(mat_.rows() / 2); }
    const RealMatrix &mat() const { return mat_; }

    /// (this o other): apply `other` first.
    SymplecticTransform operator*(const SymplecticTransform &other) const;
    SymplecticTransform inverse() const;

   private:
    struct Trusted {};
    SymplecticTransform(RealMatrix mat, Trusted) : mat_(std::move(mat)) {}
    friend SymplecticTransform make_trusted_symplectic(RealMatrix mat);

    RealMatrix mat_;
};

/// Complex N x N unitary acting on annihilation operators: a -> U a.
class PassiveUnitary {
   public:
    explicit PassiveUnitary(ComplexMatrix mat, double tol = kTol.unitary);

    static PassiveUnitary identity(std::size_t n_modes);

    std::size_t n_modes() const { return static_cast<std::size_t>(mat_.rows()); }
    const ComplexMatrix &mat() const { return mat_; }

   private:
    ComplexMatrix mat_;
};

/// Per-mode squeezing parameters; r > 0 squeezes x.
class SqueezingVector {
   public:
    SqueezingVector() = default;
    explicit SqueezingVector(RealVector r);
    SqueezingVector(std::initializer_list<double> r);

    std::size_t size() const { return static_cast<std::size_t>(r_.size()); }
    const RealVector &values() const { return r_; }
    double operator[](std::size_t k) const { return r_(static_cast<Eigen::Index>(k)); }

   private:
    RealVector r_;
};

/// Skips the symplectic check. For internal compositions of already-validated
/// factors; callers own the invariant.
SymplecticTransform make_trusted_symplectic(RealMatrix mat);

/// max |S Omega S^T - Omega|.
double symplectic_error(const RealMatrix &s);
/// max |U U^dag - I|.
double unitarity_error(const ComplexMatrix &u);
/// max |O^T O - I|.
double orthogonality_error(const RealMatrix &o);

GaussianState squeezed_vacuum(const SqueezingVector &r);

/// diag(e^{-r}) (+) diag(e^{+r}).
SymplecticTransform squeeze_transform(const SqueezingVector &r);

/// Two-mode beam splitter on modes i, j with transfer matrix
/// [[sqrt(T), e^{i phi} sqrt(1-T)], [-e^{-i phi} sqrt(1-T), sqrt(T)]].
SymplecticTransform beamsplitter(std::size_t n, std::size_t i, std::size_t j, double transmissivity,
                                 double phase = 0.0);

/// Rotation of mode i by phi: a_i -> e^{i phi} a_i.
SymplecticTransform phase_shift(std::size_t n, std::size_t i, double phi);

/// O = [[Re U, -Im U], [Im U, Re U]].
SymplecticTransform passive_to_symplectic(const PassiveUnitary &u);

/// Inverse of passive_to_symplectic. Requires an orthogonal symplectic matrix
/// with the passive block structure.
PassiveUnitary symplectic_to_passive(const SymplecticTransform &o, double tol = 1e-10);

/// cov' = S cov S^T. Labels are kept.
GaussianState apply(const SymplecticTransform &s, const GaussianState &state);

/// The 2x2 complex transfer matrix used by `beamsplitter`.
Eigen::Matrix2cd beamsplitter_matrix(double transmissivity, double phase);

}  // namespace mimsi
