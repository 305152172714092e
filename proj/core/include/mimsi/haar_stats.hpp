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
#include <vector>

#include "mimsi/common.hpp"
#include "mimsi/random.hpp"

namespace mimsi {

struct HistogramReport {
    std::vector<double> bin_edges;    // n_bins + 1, strictly increasing
    std::vector<double> frequencies;  // n_bins, sums to 1
    std::size_t n_elements = 0;

    std::size_t n_bins() const { return frequencies.size(); }
};

/// Histogram of |U_jk| over [0, 1]. Bins are [left, right) except the last,
/// which is closed. `edge_trim` drops that many leading and trailing rows and
/// columns first.
HistogramReport amplitude_histogram(const ComplexMatrix &u, std::size_t n_bins, std::size_t edge_trim = 0);

/// Histogram of arg(U_jk) over (-pi, pi]; bins are (left, right]. Zero
/// entries have no phase and are skipped.
HistogramReport phase_histogram(const ComplexMatrix &u, std::size_t n_bins, std::size_t edge_trim = 0);

/// P(a) = 2 (M - 1) (1 - a^2)^(M - 2) a, the density of |U_jk| for a Haar
/// random M x M unitary.
double theoretical_amplitude_pdf(std::size_t m, double a);

/// Its distribution function, 1 - (1 - a^2)^(M - 1).
double theoretical_amplitude_cdf(std::size_t m, double a);

/// The density integrated exactly over each amplitude bin.
HistogramReport binned_amplitude_theory(std::size_t m, std::size_t n_bins);

/// Uniform phase over the same bins as phase_histogram.
HistogramReport binned_phase_theory(std::size_t n_bins);

/// sum_i sqrt(p_i q_i). Throws InvalidArgument if the bin edges differ.
double bhattacharyya_fidelity(const HistogramReport &p, const HistogramReport &q);

struct HaarComparison {
    std::size_t n_modes = 0;
    std::size_t n_bins = 0;
    std::size_t edge_trim = 0;
    double amplitude_vs_theory = 0.0;
    double phase_vs_theory = 0.0;
    double amplitude_vs_sample = 0.0;
    double phase_vs_sample = 0.0;
    HistogramReport amplitude;
    HistogramReport phase;
    HistogramReport amplitude_theory;
    HistogramReport phase_theory;
};

/// Amplitude and phase fidelities of U against binned theory and against one
/// Haar sample of the same size drawn from `rng`.
HaarComparison compare_to_haar(const ComplexMatrix &u, std::size_t n_bins, Rng &rng, std::size_t edge_trim = 0);

/// Fidelities of Haar samples against theory: the floor set by finite
/// sampling and binning.
struct HaarCalibration {
    std::size_t n_modes = 0;
    std::size_t n_bins = 0;
    std::size_t n_samples = 0;
    double amplitude_mean = 0.0;
    double amplitude_min = 0.0;
    double phase_mean = 0.0;
    double phase_min = 0.0;
};

HaarCalibration calibrate_haar_floor(std::size_t m, std::size_t n_bins, std::size_t n_samples, std::uint64_t seed,
                                     std::size_t edge_trim = 0);

}  // namespace mimsi
