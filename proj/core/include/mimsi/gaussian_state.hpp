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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mimsi/common.hpp"

namespace mimsi {

enum class Rail : std::uint8_t { A, B };

char rail_name(Rail rail);
Rail parse_rail(std::string_view name);

/// Spatial rail plus temporal bin of one optical mode.
struct ModeLabel {
    Rail rail = Rail::A;
    std::size_t t = 0;

    friend bool operator==(const ModeLabel &, const ModeLabel &) = default;
    std::string str() const;
};

/// Zero-mean Gaussian state described by its covariance matrix.
///
/// Quadratures are ordered in xxpp blocks: rows [0, N) are x_0..x_{N-1}, rows
/// [N, 2N) are p_0..p_{N-1}. Units are hbar = 2, so the vacuum covariance is
/// the identity. The constructor checks shape and symmetry only; the (more
/// expensive) uncertainty-principle check lives in `check_physical`.
class GaussianState {
   public:
    explicit GaussianState(RealMatrix cov, std::vector<ModeLabel> labels = {});

    std::size_t n_modes() const { return n_modes_; }
    const RealMatrix &cov() const { return cov_; }
    const std::vector<ModeLabel> &labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

    /// Index of the mode carrying `label`, if labels are present.
    std::optional<std::size_t> find(const ModeLabel &label) const;

    /// Symplectic eigenvalues, sorted descending.
    RealVector symplectic_eigenvalues() const;
    /// max_k |nu_k - 1|.
    double purity_residual() const;
    bool is_pure(double tol = kTol.purity) const { return purity_residual() <= tol; }

    /// Throws InvalidArgument unless V + i*Omega is positive semidefinite.
    void check_physical(double tol = kTol.physicality) const;

   private:
    std::size_t n_modes_;
    RealMatrix cov_;
    std::vector<ModeLabel> labels_;
};

/// The symplectic form Omega = [[0, I], [-I, 0]] in xxpp ordering.
RealMatrix symplectic_form(std::size_t n_modes);

/// Symplectic eigenvalues of a positive-definite covariance, sorted descending.
RealVector symplectic_eigenvalues(const RealMatrix &cov);

/// Max absolute asymmetry of a square matrix.
double asymmetry(const RealMatrix &m);

GaussianState vacuum(std::size_t n);

/// Squeezing in dB (10*log10 of the variance ratio) to the squeezing parameter r.
double db_to_r(double squeezing_db);
double r_to_db(double r);

/// Block-direct sum; labels are concatenated when both sides carry them.
GaussianState tensor(const GaussianState &a, const GaussianState &b);

/// Output mode k is input mode sigma[k]. sigma must be a permutation.
GaussianState permute(const GaussianState &state, std::span<const std::size_t> sigma);

/// Pure-loss channel with per-mode transmission efficiency eta in [0, 1].
GaussianState loss_channel(const GaussianState &state, std::span<const double> eta);

/// |<psi1|psi2>|^2 for two pure zero-mean states: 2^N / sqrt(det(V1 + V2)).
double pure_overlap(const GaussianState &a, const GaussianState &b, double purity_tol = kTol.purity);

/// Same as pure_overlap on raw covariance matrices, without the purity check.
double pure_overlap_unchecked(const RealMatrix &v1, const RealMatrix &v2);

}  // namespace mimsi
