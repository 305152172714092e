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
#include <functional>
#include <span>
#include <vector>

#include "mimsi/cluster.hpp"
#include "mimsi/common.hpp"
#include "mimsi/conditioner.hpp"
#include "mimsi/random.hpp"
#include "mimsi/symplectic.hpp"

namespace mimsi {

/// Distribution of the per-mode test squeezing r_test.
struct TestDistribution {
    enum class Kind { Uniform, Point };
    Kind kind = Kind::Uniform;
    double low = -0.5;
    double high = 0.5;  // ignored for Point, which always returns `low`

    void validate() const;
    double sample(Rng &rng) const;
};

/// Haar-distributed n x n unitary.
PassiveUnitary sample_haar_passive(std::size_t n, Rng &rng);

/// How the cluster is turned into an n-mode interferometer.
struct Strategy {
    enum class Kind { Linear, Knights };
    Kind kind = Kind::Linear;
    std::size_t n_out = 0;  // Knights only; Linear always outputs m_bins modes
    KnightLayout layout;

    void validate(const ClusterConfig &config) const;
    std::size_t n_outputs(const ClusterConfig &config) const;
    std::size_t n_angles(const ClusterConfig &config) const;
    MeasurementPlan plan(const ClusterConfig &config, std::span<const double> thetas) const;
};

struct InducedSample {
    PassiveUnitary u;
    SqueezingVector r;
};

/// Builds the cluster once; each call draws fresh angles uniformly from
/// [-pi/2, pi/2] and runs conditioning and decomposition. Thread-safe.
class InducedSampler {
  public:
    InducedSampler(ClusterConfig config, Strategy strategy);

    InducedSample operator()(Rng &rng) const;
    InducedSample with_angles(std::span<const double> thetas) const;

    std::size_t n_outputs() const { return n_out_; }
    std::size_t n_angles() const { return n_angles_; }
    const GaussianState &cluster() const { return cluster_; }

  private:
    ClusterConfig config_;
    Strategy strategy_;
    GaussianState cluster_;
    std::size_t n_out_;
    std::size_t n_angles_;
};

InducedSample sample_induced_unitary(const ClusterConfig &config, const Strategy &strategy, Rng &rng);

/// Covariance of U S(r) |0>.
RealMatrix pure_state_cov(const ComplexMatrix &u, const RealVector &r);

/// |<U S(r)0 | W S(r)0>|^{2t}.
double fidelity_moment(const PassiveUnitary &u, const PassiveUnitary &w, const SqueezingVector &r_test, int t);

using UnitarySampler = std::function<PassiveUnitary(Rng &)>;

struct DeviationSettings {
    std::size_t n_pairs = 1000;
    std::size_t n_rtest = 10;
    std::size_t n_batches = 20;
    std::vector<int> orders{1};
    TestDistribution p_test;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    void validate() const;
};

struct DeviationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int t = 1;
    std::size_t n_pairs = 0;
    std::size_t n_rtest = 0;
    std::uint64_t seed = 0;
    double term_hh = 0.0;  // mean intra-Haar moment
    double term_pp = 0.0;  // mean intra-induced moment
    double term_hp = 0.0;  // mean cross moment
    std::vector<double> batch_means;
};

/// Monte-Carlo estimate of E_r [ F_HH + F_PP - 2 F_HP ] where each F is the mean
/// t-th fidelity moment over independent pairs. `induced` plays the role of the
/// parameterised family; passing a Haar sampler there gives the self-test.
/// One estimate per entry of settings.orders, all from the same samples.
/// Results do not depend on settings.workers.
std::vector<DeviationEstimate> estimate_deviation(std::size_t n_modes, const UnitarySampler &induced,
                                                  const DeviationSettings &settings);

std::vector<DeviationEstimate> estimate_deviation(const ClusterConfig &config, const Strategy &strategy,
                                                  const DeviationSettings &settings);

}  // namespace mimsi
