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

#include "mimsi/haar_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mimsi/expressibility.hpp"

namespace mimsi {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> uniform_edges(double lo, double hi, std::size_t n_bins) {
    std::vector<double> edges(n_bins + 1);
    for (std::size_t k = 0; k <= n_bins; ++k) {
        edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_bins);
    }
    edges[n_bins] = hi;
    return edges;
}

void check_bins(std::size_t n_bins) {
    if (n_bins == 0) {
        throw InvalidArgument("histogram needs at least one bin");
    }
}

ComplexMatrix trimmed(const ComplexMatrix &u, std::size_t edge_trim) {
    auto t = static_cast<Eigen::Index>(edge_trim);
    if (2 * t >= u.rows() || 2 * t >= u.cols()) {
        throw InvalidArgument("edge_trim removes every row or column");
    }
    return u.block(t, t, u.rows() - 2 * t, u.cols() - 2 * t);
}

HistogramReport normalise(std::vector<double> edges, std::vector<double> counts, std::size_t n) {
    HistogramReport h{std::move(edges), std::move(counts), n};
    if (n == 0) {
        throw InvalidArgument("histogram has no elements");
    }
    for (double &c : h.frequencies) {
        c /= static_cast<double>(n);
    }
    return h;
}

}  // namespace

HistogramReport amplitude_histogram(const ComplexMatrix &u, std::size_t n_bins, std::size_t edge_trim) {
    check_bins(n_bins);
    ComplexMatrix v = trimmed(u, edge_trim);
    std::vector<double> counts(n_bins, 0.0);
    auto nb = static_cast<double>(n_bins);
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            double a = std::clamp(std::abs(v(r, c)), 0.0, 1.0);
            auto k = static_cast<std::size_t>(std::floor(a * nb));
            counts[std::min(k, n_bins - 1)] += 1.0;
        }
    }
    return normalise(uniform_edges(0.0, 1.0, n_bins), std::move(counts), static_cast<std::size_t>(v.size()));
}

HistogramReport phase_histogram(const ComplexMatrix &u, std::size_t n_bins, std::size_t edge_trim) {
    check_bins(n_bins);
    ComplexMatrix v = trimmed(u, edge_trim);
    std::vector<double> counts(n_bins, 0.0);
    std::size_t n = 0;
    auto nb = static_cast<double>(n_bins);
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            if (v(r, c) == Complex(0.0)) {
                continue;
            }
            double phi = std::arg(v(r, c));
            if (phi <= -kPi) {
                phi = kPi;
            }
            double pos = std::ceil((phi + kPi) / (2.0 * kPi) * nb) - 1.0;
            auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, nb - 1.0));
            counts[k] += 1.0;
            ++n;
        }
    }
    return normalise(uniform_edges(-kPi, kPi, n_bins), std::move(counts), n);
}

double theoretical_amplitude_pdf(std::size_t m, double a) {
    if (m < 2) {
        throw InvalidArgument("theoretical_amplitude_pdf: M must be at least 2");
    }
    if (!(a >= 0.0 && a <= 1.0)) {
        throw InvalidArgument("theoretical_amplitude_pdf: a must lie in [0, 1]");
    }
    auto md = static_cast<double>(m);
    return 2.0 * (md - 1.0) * std::pow(1.0 - a * a, md - 2.0) * a;
}

double theoretical_amplitude_cdf(std::size_t m, double a) {
    if (m < 2) {
        throw InvalidArgument("theoretical_amplitude_cdf: M must be at least 2");
    }
    a = std::clamp(a, 0.0, 1.0);
    return -std::expm1(static_cast<double>(m - 1) * std::log1p(-a * a));
}

HistogramReport binned_amplitude_theory(std::size_t m, std::size_t n_bins) {
    check_bins(n_bins);
    std::vector<double> edges = uniform_edges(0.0, 1.0, n_bins);
    std::vector<double> freq(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        freq[k] = theoretical_amplitude_cdf(m, edges[k + 1]) - theoretical_amplitude_cdf(m, edges[k]);
    }
    return {std::move(edges), std::move(freq), 0};
}

HistogramReport binned_phase_theory(std::size_t n_bins) {
    check_bins(n_bins);
    return {uniform_edges(-kPi, kPi, n_bins), std::vector<double>(n_bins, 1.0 / static_cast<double>(n_bins)), 0};
}

double bhattacharyya_fidelity(const HistogramReport &p, const HistogramReport &q) {
    if (p.bin_edges.size() != q.bin_edges.size() || p.frequencies.size() != q.frequencies.size()) {
        throw InvalidArgument("bhattacharyya_fidelity: histograms have different bins");
    }
    for (std::size_t k = 0; k < p.bin_edges.size(); ++k) {
        if (std::abs(p.bin_edges[k] - q.bin_edges[k]) > 1e-12) {
            throw InvalidArgument("bhattacharyya_fidelity: histograms have different bin edges");
        }
    }
    double f = 0.0;
    for (std::size_t k = 0; k < p.frequencies.size(); ++k) {
        f += std::sqrt(std::max(p.frequencies[k], 0.0) * std::max(q.frequencies[k], 0.0));
    }
    return std::min(f, 1.0);
}

HaarComparison compare_to_haar(const ComplexMatrix &u, std::size_t n_bins, Rng &rng, std::size_t edge_trim) {
    if (u.rows() != u.cols() || u.rows() < 2) {
        throw InvalidArgument("compare_to_haar: need a square matrix of size >= 2");
    }
    auto m = static_cast<std::size_t>(u.rows());
    HaarComparison out;
    out.n_modes = m;
    out.n_bins = n_bins;
    out.edge_trim = edge_trim;
    out.amplitude = amplitude_histogram(u, n_bins, edge_trim);
    out.phase = phase_histogram(u, n_bins, edge_trim);
    out.amplitude_theory = binned_amplitude_theory(m, n_bins);
    out.phase_theory = binned_phase_theory(n_bins);
    out.amplitude_vs_theory = bhattacharyya_fidelity(out.amplitude, out.amplitude_theory);
    out.phase_vs_theory = bhattacharyya_fidelity(out.phase, out.phase_theory);

    ComplexMatrix h = sample_haar_passive(m, rng).mat();
    out.amplitude_vs_sample = bhattacharyya_fidelity(out.amplitude, amplitude_histogram(h, n_bins, edge_trim));
    out.phase_vs_sample = bhattacharyya_fidelity(out.phase, phase_histogram(h, n_bins, edge_trim));
    return out;
}

HaarCalibration calibrate_haar_floor(std::size_t m, std::size_t n_bins, std::size_t n_samples, std::uint64_t seed,
                                     std::size_t edge_trim) {
    if (n_samples == 0) {
        throw InvalidArgument("calibrate_haar_floor: need at least one sample");
    }
    HaarCalibration cal{m, n_bins, n_samples, 0.0, 1.0, 0.0, 1.0};
    HistogramReport amp_theory = binned_amplitude_theory(m, n_bins);
    HistogramReport phase_theory = binned_phase_theory(n_bins);
    for (std::size_t s = 0; s < n_samples; ++s) {
        Rng rng = make_rng(seed, {s});
        ComplexMatrix h = sample_haar_passive(m, rng).mat();
        double fa = bhattacharyya_fidelity(amplitude_histogram(h, n_bins, edge_trim), amp_theory);
        double fp = bhattacharyya_fidelity(phase_histogram(h, n_bins, edge_trim), phase_theory);
        cal.amplitude_mean += fa;
        cal.phase_mean += fp;
        cal.amplitude_min = std::min(cal.amplitude_min, fa);
        cal.phase_min = std::min(cal.phase_min, fp);
    }
    cal.amplitude_mean /= static_cast<double>(n_samples);
    cal.phase_mean /= static_cast<double>(n_samples);
    return cal;
}

}  // namespace mimsi
