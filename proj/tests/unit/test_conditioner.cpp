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

#include <gtest/gtest.h>

#include <numbers>

#include "mimsi/cluster.hpp"
#include "mimsi/conditioner.hpp"
#include "support/test_support.hpp"

using namespace mimsi;

namespace {

constexpr double kPi = std::numbers::pi;

ClusterConfig chain(std::size_t m, std::vector<std::size_t> delays, double db = 3.0) {
    ClusterConfig c;
    c.m_bins = m;
    c.delays = std::move(delays);
    c.squeeze_a_db = db;
    c.squeeze_b_db = db;
    return c;
}

// Gaussian conditioning written out directly: rotate, then
// V_A - V_AB (Pi V_B Pi)^+ V_BA with Pi projecting on x of the measured mode.
RealMatrix schur_oracle(const RealMatrix &v, std::size_t k, double theta) {
    auto n = v.rows() / 2;
    RealMatrix r = RealMatrix::Identity(v.rows(), v.cols());
    auto x = static_cast<Eigen::Index>(k);
    r(x, x) = std::cos(theta);
    r(x, n + x) = std::sin(theta);
    r(n + x, x) = -std::sin(theta);
    r(n + x, n + x) = std::cos(theta);
    RealMatrix w = r * v * r.transpose();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index q = 0; q < v.rows(); ++q) {
        if (q != x && q != n + x) {
            keep.push_back(q);
        }
    }
    auto nk = static_cast<Eigen::Index>(keep.size());
    RealMatrix va(nk, nk), vab(nk, 2), vb(2, 2);
    Eigen::Index b[2] = {x, n + x};
    for (Eigen::Index i = 0; i < nk; ++i) {
        for (Eigen::Index j = 0; j < nk; ++j) {
            va(i, j) = w(keep[i], keep[j]);
        }
        for (int j = 0; j < 2; ++j) {
            vab(i, j) = w(keep[i], b[j]);
        }
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            vb(i, j) = w(b[i], b[j]);
        }
    }
    RealMatrix proj = RealMatrix::Zero(2, 2);
    proj(0, 0) = vb(0, 0);
    RealMatrix pinv = proj.completeOrthogonalDecomposition().pseudoInverse();
    return va - vab * pinv * vab.transpose();
}

}  // namespace

TEST(conditioner, two_mode_squeezed_vacuum) {
    for (double r : {0.1, 0.5, 1.2}) {
        GaussianState tmsv = build_epr_rails(chain(1, {}, r_to_db(r)));
        GaussianState out = homodyne_condition(tmsv, 1, 0.0);
        ASSERT_EQ(out.n_modes(), 1u);
        EXPECT_NEAR(out.cov()(0, 0), 1.0 / std::cosh(2 * r), 1e-9);
        EXPECT_NEAR(out.cov()(0, 0) * out.cov()(1, 1), 1.0, 1e-9);
    }
}

TEST(conditioner, matches_schur_oracle) {
    Rng rng = make_rng(8);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + trial % 5;
        GaussianState s(oracle::random_mixed_cov(n, 0.8, 0.5, rng));
        std::size_t k = trial % n;
        double th = ang(rng);
        GaussianState out = homodyne_condition(s, k, th);
        EXPECT_LT(oracle::max_abs_diff(out.cov(), schur_oracle(s.cov(), k, th)), 1e-10);
    }
}

TEST(conditioner, vacuum_stays_vacuum) {
    GaussianState out = homodyne_condition(vacuum(3), 1, 0.7);
    EXPECT_LT(oracle::max_abs_diff(out.cov(), RealMatrix::Identity(4, 4)), 1e-15);
}

TEST(conditioner, infinitely_squeezed_measurement_is_safe) {
    // Measuring x of an x-eigenstate-like mode with zero variance.
    RealMatrix v = RealMatrix::Identity(4, 4);
    v(0, 0) = 0.0;
    GaussianState out = homodyne_condition(GaussianState(v), 0, 0.0);
    EXPECT_LT(oracle::max_abs_diff(out.cov(), RealMatrix::Identity(2, 2)), 1e-15);
}

TEST(conditioner, monte_carlo_oracle_small) {
    GaussianState s = build_cluster(chain(2, {1}, 3.0));
    std::vector<double> th = {0.4, -1.1};
    MeasurementPlan plan = linear_plan(2, th);
    GaussianState out = apply_plan(s, plan);
    Rng rng = make_rng(99);
    auto mc = oracle::monte_carlo_condition(s.cov(), plan, 200000, rng);
    RealMatrix z = (out.cov() - mc.cov).cwiseQuotient(mc.std_error);
    EXPECT_LT(z.cwiseAbs().maxCoeff(), 5.0);
}

TEST(conditioner, plan_validation) {
    MeasurementPlan p;
    p.entries = {{0, 0.0}, {0, 0.1}};
    p.outputs = {1};
    EXPECT_THROW(p.validate(2), InvalidArgument);
    p.entries = {{0, 0.0}};
    p.outputs = {};
    EXPECT_THROW(p.validate(1), InvalidArgument);
    p.outputs = {1};
    EXPECT_THROW(p.validate(3), InvalidArgument);
    p.outputs = {5};
    EXPECT_THROW(p.validate(2), InvalidArgument);
    p.entries = {{0, std::nan("")}};
    p.outputs = {1};
    EXPECT_THROW(p.validate(2), InvalidArgument);
    p.entries = {{0, 0.3}};
    EXPECT_NO_THROW(p.validate(2));
}

TEST(conditioner, apply_plan_equals_sequential_homodyne) {
    GaussianState s = build_cluster(chain(5, {1, 2}, 3.0));
    std::vector<double> th = {0.1, 0.9, -0.4, 1.3, -1.5};
    MeasurementPlan plan = linear_plan(5, th);
    GaussianState out = apply_plan(s, plan);
    // Sequential reference. Measured modes are rail A 0..4, so after each
    // removal the next rail-A mode sits at index 0.
    GaussianState ref = s;
    for (double t : th) {
        ref = homodyne_condition(ref, 0, t);
    }
    EXPECT_LT(oracle::max_abs_diff(out.cov(), ref.cov()), 1e-11);
    ASSERT_TRUE(out.has_labels());
    EXPECT_EQ(out.labels()[0], (ModeLabel{Rail::B, 0}));
    EXPECT_LT(out.purity_residual(), 1e-9);
}

TEST(conditioner, worker_count_does_not_change_result) {
    GaussianState s = build_cluster(chain(40, {1, 8}, 3.0));
    Rng rng = make_rng(4);
    std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
    std::vector<double> th(40);
    for (double &t : th) {
        t = ang(rng);
    }
    MeasurementPlan plan = linear_plan(40, th);
    GaussianState a = apply_plan(s, plan, 1);
    GaussianState b = apply_plan(s, plan, 4);
    EXPECT_EQ(a.cov(), b.cov());
}

TEST(conditioner, linear_plan_shape) {
    std::vector<double> th = {0.1, 0.2, 0.3};
    MeasurementPlan p = linear_plan(3, th);
    ASSERT_EQ(p.entries.size(), 3u);
    EXPECT_EQ(p.entries[2].mode, 2u);
    EXPECT_EQ(p.entries[2].theta, 0.3);
    EXPECT_EQ(p.outputs, (std::vector<std::size_t>{3, 4, 5}));
    std::vector<double> short_th = {0.1};
    EXPECT_THROW(linear_plan(3, short_th), InvalidArgument);
}

TEST(conditioner, knights_plan_shape) {
    std::vector<double> th(knights_measured_count(4, 2), 0.0);
    MeasurementPlan p = knights_plan(4, 2, th);
    // (A, 1) and (B, 3)
    EXPECT_EQ(p.outputs, (std::vector<std::size_t>{1, 7}));
    EXPECT_EQ(p.entries.size(), 6u);
    EXPECT_NO_THROW(p.validate(8));

    KnightLayout layout;
    layout.t0 = 0;
    layout.first_rail = Rail::B;
    std::vector<double> th3(knights_measured_count(8, 3), 0.0);
    MeasurementPlan q = knights_plan(8, 3, th3, layout);
    EXPECT_EQ(q.outputs, (std::vector<std::size_t>{8, 2, 12}));
    layout.t0 = 5;
    EXPECT_THROW(knights_plan(8, 3, th3, layout), InvalidArgument);
}

TEST(conditioner, chop_decouples_a_bin) {
    std::size_t m = 12;
    GaussianState s = build_cluster(chain(m, {1}, 3.0));
    std::size_t t = 6;
    std::vector<std::size_t> cut;
    for (std::size_t d : {1, 2}) {
        for (std::size_t tt : {t - d, t + d}) {
            cut.push_back(tt);
            cut.push_back(m + tt);
        }
    }
    GaussianState c = chop(s, cut);
    ASSERT_EQ(c.n_modes(), 2 * m - cut.size());
    auto a = c.find({Rail::A, t});
    auto b = c.find({Rail::B, t});
    ASSERT_TRUE(a && b);
    auto n = static_cast<Eigen::Index>(c.n_modes());
    double leak = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == static_cast<Eigen::Index>(*a) || k == static_cast<Eigen::Index>(*b)) {
            continue;
        }
        for (Eigen::Index q : {static_cast<Eigen::Index>(*a), static_cast<Eigen::Index>(*b)}) {
            for (Eigen::Index off_r : {Eigen::Index{0}, n}) {
                for (Eigen::Index off_c : {Eigen::Index{0}, n}) {
                    leak = std::max(leak, std::abs(c.cov()(q + off_r, k + off_c)));
                }
            }
        }
    }
    EXPECT_LT(leak, 1e-12);
}

TEST(conditioner, chop_errors) {
    GaussianState s = vacuum(2);
    std::vector<std::size_t> all = {0, 1};
    EXPECT_THROW(chop(s, all), InvalidArgument);
    std::vector<std::size_t> dup = {0, 0};
    EXPECT_THROW(chop(vacuum(3), dup), InvalidArgument);
    std::vector<std::size_t> out = {7};
    EXPECT_THROW(chop(s, out), InvalidArgument);
    EXPECT_THROW(homodyne_condition(s, 2, 0.0), InvalidArgument);
}
