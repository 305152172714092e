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

#include "mimsi/expressibility.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mimsi/decomposer.hpp"
#include "mimsi/local_ops.hpp"
#include "mimsi/parallel.hpp"

namespace mimsi {

namespace {

enum StreamTag : std::uint64_t { kRtestStream = 1, kPairStream = 2 };

}  // namespace

void TestDistribution::validate() const {
    if (!std::isfinite(low) || (kind == Kind::Uniform && !(std::isfinite(high) && low < high))) {
        throw InvalidArgument("test distribution needs finite low < high");
    }
}

double TestDistribution::sample(Rng &rng) const {
    if (kind == Kind::Point) {
        return low;
    }
    return std::uniform_real_distribution<double>(low, high)(rng);
}

PassiveUnitary sample_haar_passive(std::size_t n, Rng &rng) {
    if (n == 0) {
        throw InvalidArgument("sample_haar_passive: n must be positive");
    }
    auto k = static_cast<Eigen::Index>(n);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix z(k, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index r = 0; r < k; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            z(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, k);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        Complex d = r(j, j);
        double mag = std::abs(d);
        q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0);
    }
    return PassiveUnitary(std::move(q));
}

void Strategy::validate(const ClusterConfig &config) const {
    config.validate();
    if (kind == Kind::Knights) {
        if (n_out == 0 || n_out > config.n_modes() - 1) {
            throw InvalidArgument("knights strategy: n_out must lie in [1, 2 m_bins - 1]");
        }
        if (layout.stride == 0) {
            throw InvalidArgument("knights strategy: stride must be positive");
        }
    }
}

std::size_t Strategy::n_outputs(const ClusterConfig &config) const {
    return kind == Kind::Linear ? config.m_bins : n_out;
}

std::size_t Strategy::n_angles(const ClusterConfig &config) const {
    return kind == Kind::Linear ? config.m_bins : knights_measured_count(config.m_bins, n_out);
}

MeasurementPlan Strategy::plan(const ClusterConfig &config, std::span<const double> thetas) const {
    if (kind == Kind::Linear) {
        return linear_plan(config.m_bins, thetas);
    }
    return knights_plan(config.m_bins, n_out, thetas, layout);
}

InducedSampler::InducedSampler(ClusterConfig config, Strategy strategy)
    : config_(std::move(config)),
      strategy_(std::move(strategy)),
      cluster_((strategy_.validate(config_), build_cluster(config_))),
      n_out_(strategy_.n_outputs(config_)),
      n_angles_(strategy_.n_angles(config_)) {
}

InducedSample InducedSampler::with_angles(std::span<const double> thetas) const {
    GaussianState out = apply_plan(cluster_, strategy_.plan(config_, thetas));
    EffectiveCircuit c = effective_circuit(out);
    return {std::move(c.u_eff), std::move(c.r_eff)};
}

InducedSample InducedSampler::operator()(Rng &rng) const {
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);
    std::vector<double> thetas(n_angles_);
    for (double &th : thetas) {
        th = angle(rng);
    }
    return with_angles(thetas);
}

InducedSample sample_induced_unitary(const ClusterConfig &config, const Strategy &strategy, Rng &rng) {
    return InducedSampler(config, strategy)(rng);
}

RealMatrix pure_state_cov(const ComplexMatrix &u, const RealVector &r) {
    auto n = u.rows();
    RealMatrix o(2 * n, 2 * n);
    o.topLeftCorner(n, n) = u.real();
    o.topRightCorner(n, n) = -u.imag();
    o.bottomLeftCorner(n, n) = u.imag();
    o.bottomRightCorner(n, n) = u.real();
    RealVector d(2 * n);
    d << (-2.0 * r).array().exp().matrix(), (2.0 * r).array().exp().matrix();
    RealMatrix cov = o * d.asDiagonal() * o.transpose();
    local::symmetrize(cov);
    return cov;
}

double fidelity_moment(const PassiveUnitary &u, const PassiveUnitary &w, const SqueezingVector &r_test, int t) {
    if (u.n_modes() != w.n_modes() || u.n_modes() != r_test.size()) {
        throw InvalidArgument("fidelity_moment: mode counts differ");
    }
    if (t < 1) {
        throw InvalidArgument("fidelity_moment: t must be positive");
    }
    if (r_test.values().isZero(0.0)) {
        return 1.0;
    }
    double f = pure_overlap_unchecked(pure_state_cov(u.mat(), r_test.values()), pure_state_cov(w.mat(), r_test.values()));
    return std::pow(f, t);
}

void DeviationSettings::validate() const {
    if (n_pairs < 2 || n_rtest < 1 || n_batches < 2) {
        throw InvalidArgument("estimate_deviation: need n_pairs >= 2, n_rtest >= 1, n_batches >= 2");
    }
    if (orders.empty()) {
        throw InvalidArgument("estimate_deviation: no moment orders requested");
    }
    for (int t : orders) {
        if (t < 1) {
            throw InvalidArgument("estimate_deviation: moment orders must be positive");
        }
    }
    p_test.validate();
}

std::vector<DeviationEstimate> estimate_deviation(std::size_t n_modes, const UnitarySampler &induced,
                                                  const DeviationSettings &settings) {
    settings.validate();
    if (n_modes == 0) {
        throw InvalidArgument("estimate_deviation: n_modes must be positive");
    }
    const std::size_t n_t = settings.orders.size();
    const std::size_t n_batches = std::min(settings.n_batches, settings.n_pairs);
    const std::size_t n_units = settings.n_rtest * n_batches;

    std::vector<RealVector> r_tests(settings.n_rtest);
    for (std::size_t j = 0; j < settings.n_rtest; ++j) {
        Rng rng = make_rng(settings.seed, {kRtestStream, j});
        r_tests[j].resize(static_cast<Eigen::Index>(n_modes));
        for (Eigen::Index k = 0; k < r_tests[j].size(); ++k) {
            r_tests[j](k) = settings.p_test.sample(rng);
        }
    }

    // sums[unit][3 * ti + term], term 0 = HH, 1 = PP, 2 = HP.
    std::vector<std::vector<double>> sums(n_units, std::vector<double>(3 * n_t, 0.0));
    parallel_for(n_units, settings.workers, [&](std::size_t unit) {
        std::size_t j = unit / n_batches;
        std::size_t b = unit % n_batches;
        std::size_t lo = b * settings.n_pairs / n_batches;
        std::size_t hi = (b + 1) * settings.n_pairs / n_batches;
        Rng rng = make_rng(settings.seed, {kPairStream, j, b});
        const RealVector &r = r_tests[j];
        const bool unsqueezed = r.isZero(0.0);
        auto haar_cov = [&] { return pure_state_cov(sample_haar_passive(n_modes, rng).mat(), r); };
        auto induced_cov = [&] {
            PassiveUnitary u = induced(rng);
            if (u.n_modes() != n_modes) {
                throw InvalidArgument("estimate_deviation: sampler returned the wrong mode count");
            }
            return pure_state_cov(u.mat(), r);
        };
        std::vector<double> &acc = sums[unit];
        for (std::size_t i = lo; i < hi; ++i) {
            RealMatrix h1 = haar_cov();
            RealMatrix h2 = haar_cov();
            RealMatrix p1 = induced_cov();
            RealMatrix p2 = induced_cov();
            RealMatrix h3 = haar_cov();
            RealMatrix p3 = induced_cov();
            // vacuum test states overlap exactly, whatever the interferometers
            double f[3] = {1.0, 1.0, 1.0};
            if (!unsqueezed) {
                f[0] = pure_overlap_unchecked(h1, h2);
                f[1] = pure_overlap_unchecked(p1, p2);
                f[2] = pure_overlap_unchecked(h3, p3);
            }
            for (std::size_t ti = 0; ti < n_t; ++ti) {
                for (int term = 0; term < 3; ++term) {
                    acc[3 * ti + term] += std::pow(f[term], settings.orders[ti]);
                }
            }
        }
    });

    std::vector<DeviationEstimate> out;
    for (std::size_t ti = 0; ti < n_t; ++ti) {
        DeviationEstimate est;
        est.t = settings.orders[ti];
        est.n_pairs = settings.n_pairs;
        est.n_rtest = settings.n_rtest;
        est.seed = settings.seed;
        double total[3] = {0.0, 0.0, 0.0};
        est.batch_means.assign(n_batches, 0.0);
        for (std::size_t unit = 0; unit < n_units; ++unit) {
            std::size_t b = unit % n_batches;
            const std::vector<double> &acc = sums[unit];
            for (int term = 0; term < 3; ++term) {
                total[term] += acc[3 * ti + term];
            }
            est.batch_means[b] += acc[3 * ti] + acc[3 * ti + 1] - 2.0 * acc[3 * ti + 2];
        }
        for (std::size_t b = 0; b < n_batches; ++b) {
            std::size_t size = (b + 1) * settings.n_pairs / n_batches - b * settings.n_pairs / n_batches;
            est.batch_means[b] /= static_cast<double>(size * settings.n_rtest);
        }
        double denom = static_cast<double>(settings.n_pairs * settings.n_rtest);
        est.term_hh = total[0] / denom;
        est.term_pp = total[1] / denom;
        est.term_hp = total[2] / denom;
        est.value = est.term_hh + est.term_pp - 2.0 * est.term_hp;

        double mean = 0.0;
        for (double m : est.batch_means) {
            mean += m;
        }
        mean /= static_cast<double>(n_batches);
        double ss = 0.0;
        for (double m : est.batch_means) {
            ss += (m - mean) * (m - mean);
        }
        double var = ss / static_cast<double>(n_batches - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n_batches));
        out.push_back(std::move(est));
    }
    return out;
}

std::vector<DeviationEstimate> estimate_deviation(const ClusterConfig &config, const Strategy &strategy,
                                                  const DeviationSettings &settings) {
    auto sampler = std::make_shared<InducedSampler>(config, strategy);
    return estimate_deviation(sampler->n_outputs(), [sampler](Rng &rng) { return (*sampler)(rng).u; },
                              settings);
}

}  // namespace mimsi
