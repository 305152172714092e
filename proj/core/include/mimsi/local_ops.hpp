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

// In-place updates of a covariance matrix by transforms that touch one or two
// modes. These cost O(N) per call instead of the O(N^3) dense product and are
// what the cluster builder and the conditioner use on large states.

#include <Eigen/Dense>

#include "mimsi/common.hpp"

namespace mimsi::local {

/// Apply the passive 2x2 transfer matrix `u` to modes (i, j) of `cov`.
void apply_two_mode_passive(RealMatrix &cov, std::size_t i, std::size_t j, const Eigen::Matrix2cd &u);

/// Rotate mode i by phi (a_i -> e^{i phi} a_i).
void apply_phase(RealMatrix &cov, std::size_t i, double phi);

/// Make `cov` exactly symmetric by averaging with its transpose.
void symmetrize(RealMatrix &cov);

}  // namespace mimsi::local
