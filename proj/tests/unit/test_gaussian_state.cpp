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
#include <vector>

#include "mimsi/expressibility.hpp"
#include "mimsi/gaussian_state.hpp"
#include "mimsi/symplectic.hpp"
#include "support/test_support.hpp"

using namespace mimsi;

TEST(gaussian_state, construction_checks) {
    EXPECT_THROW(GaussianState(RealMatrix::Identity(3, 3)), InvalidArgument);
    EXPECT_THROW(GaussianState(RealMatrix(0, 0)), InvalidArgument);
    RealMatrix asym = RealMatrix::Identity(2, 2);
    asym(0, 1) = 1e-3;
    EXPECT_THROW(GaussianState{asym}, InvalidArgument);
    EXPECT_THROW(GaussianState(RealMatrix::Identity(4, 4), {{Rail::A, 0}}), InvalidArgument);
    EXPECT_THROW(vacuum(0), InvalidArgument);
}

TEST(gaussian_state, labels) {
    GaussianState s(RealMatrix::Identity(4, 4), {{Rail::A, 3}, {Rail::B, 1}});
    EXPECT_EQ(s.find({Rail::B, 1}), 1u);
    EXPECT_FALSE(s.find({Rail::B, 3}).has_value());
    EXPECT_EQ(s.labels()[0].str(), "A3");
    EXPECT_EQ(parse_rail("b"), Rail::B);
    EXPECT_THROW(parse_rail("C"), InvalidArgument);
}

TEST(gaussian_state, vacuum_is_pure_and_physical) {
    auto v = vacuum(4);
    EXPECT_EQ(v.cov(), RealMatrix::Identity(8, 8));
    EXPECT_NEAR(v.purity_residual(), 0.0, 1e-14);
    EXPECT_NO_THROW(v.check_physical());
}

TEST(gaussian_state, unphysical_rejected) {
    RealMatrix m = RealMatrix::Identity(2, 2) * 0.5;
    EXPECT_THROW(GaussianState(m).check_physical(), InvalidArgument);
}

TEST(gaussian_state, db_conversion) {
    // 10 log10(e^{2r}) dB
    EXPECT_NEAR(db_to_r(3.0), 3.0 * std::log(10.0) / 20.0, 1e-15);
    EXPECT_NEAR(r_to_db(db_to_r(2.3)), 2.3, 1e-14);
    EXPECT_NEAR(std::exp(2 * db_to_r(10.0)), 10.0, 1e-12);
}

TEST(gaussian_state, symplectic_eigenvalues_forward_oracle) {
    Rng rng = make_rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + trial % 6;
        RealVector nu;
        RealMatrix v = oracle::random_mixed_cov(n, 1.0, 2.0, rng, &nu);
        std::sort(nu.data(), nu.data() + nu.size(), std::greater<>());
        RealVector got = symplectic_eigenvalues(v);
        EXPECT_LT((got - nu).cwiseAbs().maxCoeff(), 1e-9) << "n=" << n;
    }
}

TEST(gaussian_state, pure_states_have_unit_eigenvalues) {
    Rng rng = make_rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        GaussianState s(oracle::random_pure_cov(1 + trial % 8, 1.2, rng));
        EXPECT_LT(s.purity_residual(), 1e-9);
        EXPECT_NO_THROW(s.check_physical());
    }
}

TEST(gaussian_state, tensor_and_permute) {
    GaussianState a(squeezed_vacuum({0.1}).cov(), {{Rail::A, 0}});
    GaussianState b(squeezed_vacuum({0.2, 0.3}).cov(), {{Rail::B, 0}, {Rail::B, 1}});
    GaussianState ab = tensor(a, b);
    ASSERT_EQ(ab.n_modes(), 3u);
    EXPECT_LT(oracle::max_abs_diff(ab.cov(), squeezed_vacuum({0.1, 0.2, 0.3}).cov()), 1e-15);
    EXPECT_EQ(ab.labels()[2], (ModeLabel{Rail::B, 1}));

    std::vector<std::size_t> sigma = {2, 0, 1};
    GaussianState p = permute(ab, sigma);
    EXPECT_LT(oracle::max_abs_diff(p.cov(), squeezed_vacuum({0.3, 0.1, 0.2}).cov()), 1e-15);
    EXPECT_EQ(p.labels()[0], (ModeLabel{Rail::B, 1}));
    std::vector<std::size_t> bad = {0, 0, 1};
    EXPECT_THROW(permute(ab, bad), InvalidArgument);
}

TEST(gaussian_state, loss_channel_mixes_with_vacuum) {
    auto s = squeezed_vacuum({0.5});
    std::vector<double> eta = {0.25};
    auto lossy = loss_channel(s, eta);
    EXPECT_NEAR(lossy.cov()(0, 0), 0.25 * std::exp(-1.0) + 0.75, 1e-15);
    EXPECT_GT(lossy.purity_residual(), 1e-3);
    std::vector<double> bad = {1.5};
    EXPECT_THROW(loss_channel(s, bad), InvalidArgument);
}

TEST(gaussian_state, overlap_of_squeezed_states_fock_oracle) {
    for (double r1 : {0.0, 0.2, 0.5}) {
        for (double r2 : {-0.3, 0.1, 0.4}) {
            double got = pure_overlap(squeezed_vacuum({r1}), squeezed_vacuum({r2}));
            EXPECT_NEAR(got, 1.0 / std::cosh(r1 - r2), 1e-12);
            EXPECT_NEAR(got, oracle::fock_squeezed_fidelity(r1, 0.0, r2, 0.0), 1e-9);
        }
    }
}

TEST(gaussian_state, overlap_of_rotated_squeezed_states_fock_oracle) {
    for (double phi : {0.3, 1.0, 2.5}) {
        double r = 0.45;
        auto a = squeezed_vacuum({r});
        auto b = apply(phase_shift(1, 0, phi), a);
        EXPECT_NEAR(pure_overlap(a, b), oracle::fock_squeezed_fidelity(r, 0.0, r, phi), 1e-9);
    }
}

TEST(gaussian_state, overlap_rejects_mixed) {
    std::vector<double> eta = {0.5};
    auto mixed = loss_channel(squeezed_vacuum({0.5}), eta);
    EXPECT_THROW(pure_overlap(mixed, vacuum(1)), InvalidArgument);
    EXPECT_THROW(pure_overlap(vacuum(2), vacuum(1)), InvalidArgument);
}
