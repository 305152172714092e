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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mimsi {

inline constexpr std::string_view kVersion = "0.1.0";

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical tolerances used across the library. One instance, `kTol`, holds
/// the project defaults; functions that accept a `Tolerances` default to it.
struct Tolerances {
    double symmetry = 1e-12;        // max |V - V^T| for covariance matrices
    double physicality = 1e-9;      // min eigenvalue of V + i*Omega
    double symplectic = 1e-10;      // max |S Omega S^T - Omega|
    double unitary = 1e-10;         // max |U U^dag - I|
    double purity = 1e-6;           // max |nu_k - 1| for a "pure" state
    double effective_purity = 1e-3; // purity gate for effective_circuit
    double pinv_threshold = 1e-12;  // measured variance treated as zero below this
    double degeneracy = 1e-9;       // |dr| below which squeezing values tie
};

inline constexpr Tolerances kTol{};

/// Precondition or contract violation in caller-supplied data.
class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not meet its contract (impure state, failed
/// decomposition, non-positive-definite input).
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed file contents or unreadable/unwritable paths.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace mimsi
