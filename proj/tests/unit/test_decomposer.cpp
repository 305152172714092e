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

#include <algorithm>
#include <numbers>

#include "mimsi/cluster.hpp"
#include "mimsi/conditioner.hpp"
#include "mimsi/decomposer.hpp"
#include "support/test_support.hpp"

using namespace mimsi;

namespace {

RealMatrix williamson_cov(const WilliamsonResult &w) {
    RealVector d(2 * w.nu.size());
    d << w.nu, w.nu;
    return w.s.mat() * d.asDiagonal() * w.s.mat().transpose();
}

RealMatrix bm_product(const BlochMessiahResult &bm) {
    return bm.o1.mat() * oracle::squeeze_diag(bm.r) * bm.o2.mat();
}

}  // namespace

TEST(williamson, recovers_known_spectrum) {
    Rng rng = make_rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 9;
        RealVector nu;
        RealMatrix v = oracle::random_mixed_cov(n, 1.0, 3.0, rng, &nu);
        std::sort(nu.data(), nu.data() + nu.size(), std::greater<>());
        WilliamsonResult w = williamson(v);
        EXPECT_LT((w.nu - nu).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT(symplectic_error(w.s.mat()), 1e-9);
        EXPECT_LT(oracle::max_abs_diff(williamson_cov(w), v), 1e-9);
    }
}

TEST(williamson, pure_state_has_unit_spectrum) {
    Rng rng = make_rng(1);
    RealMatrix v = oracle::random_pure_cov(6, 1.0, rng);
    WilliamsonResult w = williamson(v);
    EXPECT_LT((w.nu.array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_LT(oracle::max_abs_diff(w.s.mat() * w.s.mat().transpose(), v), 1e-10);
}

TEST(williamson, degenerate_thermal_state) {
    RealMatrix v = 3.0 * RealMatrix::Identity(6, 6);
    WilliamsonResult w = williamson(v);
    EXPECT_LT((w.nu.array() - 3.0).abs().maxCoeff(), 1e-12);
    EXPECT_LT(oracle::max_abs_diff(williamson_cov(w), v), 1e-12);
}

TEST(williamson, rejects_bad_input) {
    EXPECT_THROW(williamson(0.5 * RealMatrix::Identity(2, 2)), NumericError);
    RealMatrix indefinite = RealMatrix::Identity(2, 2);
    indefinite(0, 0) = -1.0;
    EXPECT_THROW(williamson(indefinite), NumericError);
    EXPECT_THROW(williamson(RealMatrix::Identity(3, 3)), InvalidArgument);
    RealMatrix asym = RealMatrix::Identity(2, 2);
    asym(0, 1) = 0.2;
    EXPECT_THROW(williamson(asym), InvalidArgument);
}

TEST(bloch_messiah, reconstructs_random_symplectic) {
    Rng rng = make_rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 12;
        RealVector r = oracle::random_squeezing(n, 1.5, rng);
        RealMatrix o1 = oracle::passive_matrix(sample_haar_passive(n, rng).mat());
        RealMatrix o2 = oracle::passive_matrix(sample_haar_passive(n, rng).mat());
        RealMatrix s = o1 * oracle::squeeze_diag(r) * o2;
        BlochMessiahResult bm = bloch_messiah(SymplecticTransform(s));
        std::sort(r.data(), r.data() + r.size(), std::greater<>());
        EXPECT_LT((bm.r - r).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT(oracle::max_abs_diff(bm_product(bm), s), 1e-9);
        EXPECT_LT(orthogonality_error(bm.o1.mat()), 1e-10);
        EXPECT_LT(orthogonality_error(bm.o2.mat()), 1e-10);
        EXPECT_NO_THROW(symplectic_to_passive(bm.o1));
        EXPECT_NO_THROW(symplectic_to_passive(bm.o2));
    }
}

TEST(bloch_messiah, degenerate_squeezing) {
    Rng rng = make_rng(32);
    RealVector r(6);
    r << 0.7, 0.7, 0.7, 0.2, 0.0, 0.0;
    RealMatrix o1 = oracle::passive_matrix(sample_haar_passive(6, rng).mat());
    RealMatrix o2 = oracle::passive_matrix(sample_haar_passive(6, rng).mat());
    RealMatrix s = o1 * oracle::squeeze_diag(r) * o2;
    BlochMessiahResult bm = bloch_messiah(SymplecticTransform(s));
    EXPECT_LT((bm.r - r).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(oracle::max_abs_diff(bm_product(bm), s), 1e-9);
}

TEST(bloch_messiah, passive_input_leaves_first_factor_identity) {
    Rng rng = make_rng(33);
    RealMatrix o = oracle::passive_matrix(sample_haar_passive(5, rng).mat());
    BlochMessiahResult bm = bloch_messiah(SymplecticTransform(o));
    EXPECT_LT(bm.r.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(oracle::max_abs_diff(bm.o1.mat(), RealMatrix::Identity(10, 10)), 1e-12);
    EXPECT_LT(oracle::max_abs_diff(bm.o2.mat(), o), 1e-12);
}

TEST(bloch_messiah, squeezer_only) {
    RealVector r(3);
    r << 0.1, 0.9, 0.4;
    BlochMessiahResult bm = bloch_messiah(SymplecticTransform(oracle::squeeze_diag(r)));
    EXPECT_NEAR(bm.r(0), 0.9, 1e-12);
    EXPECT_NEAR(bm.r(2), 0.1, 1e-12);
    EXPECT_LT(oracle::max_abs_diff(bm_product(bm), oracle::squeeze_diag(r)), 1e-12);
}

TEST(effective_circuit, vacuum_gives_identity) {
    EffectiveCircuit c = effective_circuit(vacuum(4));
    EXPECT_LT(oracle::max_abs_diff(c.u_eff.mat(), ComplexMatrix::Identity(4, 4)), 1e-12);
    EXPECT_LT(c.r_eff.values().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(EffectiveCircuit::kGaugeVersion, 1);
}

TEST(effective_circuit, single_squeezed_mode) {
    EffectiveCircuit x = effective_circuit(squeezed_vacuum({0.6}));
    EXPECT_NEAR(x.r_eff[0], 0.6, 1e-12);
    EXPECT_NEAR(std::abs(x.u_eff.mat()(0, 0) - 1.0), 0.0, 1e-12);
    // p-squeezing is x-squeezing after a quarter turn
    EffectiveCircuit p = effective_circuit(squeezed_vacuum({-0.6}));
    EXPECT_NEAR(p.r_eff[0], 0.6, 1e-12);
    EXPECT_NEAR(std::abs(p.u_eff.mat()(0, 0) - Complex(0.0, 1.0)), 0.0, 1e-12);
}

TEST(effective_circuit, roundtrip_random_pure_states) {
    Rng rng = make_rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + trial % 10;
        GaussianState s(oracle::random_pure_cov(n, 1.2, rng));
        EffectiveCircuit c = effective_circuit(s);
        EXPECT_LT(oracle::max_abs_diff(reconstruct(c).cov(), s.cov()), 1e-9);
        EXPECT_LT(c.purity_residual, 1e-9);
        for (std::size_t k = 1; k < c.r_eff.size(); ++k) {
            EXPECT_GE(c.r_eff[k - 1], c.r_eff[k]);
        }
        EXPECT_GE(c.r_eff.values().minCoeff(), 0.0);
    }
}

TEST(effective_circuit, conditioned_cluster) {
    ClusterConfig cfg;
    cfg.m_bins = 6;
    cfg.delays = {1};
    cfg.squeeze_a_db = 2.3;
    cfg.squeeze_b_db = 3.0;
    std::vector<double> th = {0.3, -0.2, 1.0, 0.0, -1.4, 0.7};
    GaussianState out = apply_plan(build_cluster(cfg), linear_plan(6, th));
    EffectiveCircuit c = effective_circuit(out);
    EXPECT_EQ(c.n_modes(), 6u);
    EXPECT_LT(oracle::max_abs_diff(reconstruct(c).cov(), out.cov()), 1e-9);
}

TEST(effective_circuit, rejects_mixed_states) {
    std::vector<double> eta = {0.5, 0.5};
    GaussianState mixed = loss_channel(squeezed_vacuum({0.8, 0.3}), eta);
    EXPECT_THROW(effective_circuit(mixed), NumericError);
}

TEST(canonicalize_gauge, fixes_phases_and_order) {
    Rng rng = make_rng(50);
    ComplexMatrix u = sample_haar_passive(5, rng).mat();
    RealVector r(5);
    r << 0.2, 0.0, 0.9, 0.2, 0.0;
    ComplexMatrix u1 = u;
    RealVector r1 = r;
    canonicalize_gauge(u1, r1);
    for (int k = 1; k < 5; ++k) {
        EXPECT_GE(r1(k - 1), r1(k));
    }
    // the same state with the columns permuted and re-signed
    ComplexMatrix u2 = u;
    RealVector r2 = r;
    u2.col(0).swap(u2.col(3));
    u2.col(2) *= -1.0;
    u2.col(1) *= std::polar(1.0, 0.7);
    canonicalize_gauge(u2, r2);
    EXPECT_LT(oracle::max_abs_diff(u1, u2), 1e-14);
    EXPECT_EQ(r1, r2);
    // unsqueezed columns: largest entry real positive
    for (int k = 3; k < 5; ++k) {
        Eigen::Index lead;
        u1.col(k).cwiseAbs().maxCoeff(&lead);
        EXPECT_NEAR(u1(lead, k).imag(), 0.0, 1e-14);
        EXPECT_GT(u1(lead, k).real(), 0.0);
    }
    // the described state does not change
    auto state_cov = [](const ComplexMatrix &uu, const RealVector &rr) -> RealMatrix {
        RealMatrix o = oracle::passive_matrix(uu);
        RealMatrix d = oracle::squeeze_diag(rr);
        return o * d * d * o.transpose();
    };
    EXPECT_LT(oracle::max_abs_diff(state_cov(u1, r1), state_cov(u, r)), 1e-12);
}
