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

#include "mimsi/common.hpp"
#include "mimsi/gaussian_state.hpp"
#include "mimsi/symplectic.hpp"

namespace mimsi {

struct WilliamsonResult {
    SymplecticTransform s;  // V = S (diag(nu) (+) diag(nu)) S^T
    RealVector nu;          // symplectic eigenvalues, descending
};

/// Williamson normal form of a symmetric positive-definite covariance.
/// Throws NumericError when V is not positive definite or violates the
/// uncertainty principle (some nu < 1 - 1e-7).
WilliamsonResult williamson(const RealMatrix &cov);

struct BlochMessiahResult {
    SymplecticTransform o1;  // orthogonal symplectic (passive)
    RealVector r;            // r >= 0, descending
    SymplecticTransform o2;  // orthogonal symplectic (passive)
};

/// S = O1 (diag(e^{-r}) (+) diag(e^{r})) O2.
///
/// For an orthogonal S all r vanish; the split of S between O1 and O2 is then
/// a gauge choice and this implementation returns O1 = I, O2 = S.
BlochMessiahResult bloch_messiah(const SymplecticTransform &s);

/// P = O(U) (diag(e^{-2r}) (+) diag(e^{2r})) O(U)^T for a symmetric
/// positive-definite symplectic P (e.g. a pure-state covariance).
struct PassiveSqueezeSplit {
    ComplexMatrix u;
    RealVector r;  // r >= 0, descending
};
PassiveSqueezeSplit split_positive_symplectic(const RealMatrix &p);

/// The measurement-induced interferometer: state = U_eff S(r_eff) |0>.
struct EffectiveCircuit {
    static constexpr int kGaugeVersion = 1;

    PassiveUnitary u_eff;
    SqueezingVector r_eff;   // descending, >= 0
    double purity_residual;  // max |nu_k - 1| of the source state

    std::size_t n_modes() const { return u_eff.n_modes(); }
};

/// Williamson, then Bloch-Messiah on the symplectic factor. The trailing
/// passive factor acts on vacuum and is dropped. Throws NumericError when the
/// purity residual exceeds `purity_gate`.
EffectiveCircuit effective_circuit(const GaussianState &state, double purity_gate = kTol.effective_purity);

/// Covariance of U_eff S(r_eff) |0>.
GaussianState reconstruct(const EffectiveCircuit &circuit);

/// Canonical column gauge of (u, r): columns sorted by r descending, ties
/// (|dr| < degeneracy) ordered by descending amplitude pattern; unsqueezed
/// columns get the phase that makes their largest entry real positive, squeezed
/// columns the sign that makes its real part positive. Leaves the state
/// U S(r)|0> unchanged.
void canonicalize_gauge(ComplexMatrix &u, RealVector &r, double degeneracy = kTol.degeneracy);

}  // namespace mimsi
