// Randomized invariants over many draws.

#include <gtest/gtest.h>

#include "envprobe/commutator.hpp"
#include "envprobe/derivatives.hpp"
#include "envprobe/reconstruction.hpp"
#include "support.hpp"

using namespace envprobe;

TEST(Properties, DerivativeParity) {
    std::mt19937_64 rng(100);
    for (int n = 2; n <= 4; ++n) {
        const auto b = build_generators(n);
        for (int t = 0; t < 15; ++t) {
            DerivativeStack s;
            s.order = 6;
            s.mats = nested_derivative_matrices(testsupport::random_params(n, rng), b, 6);
            double scale = 1.0;
            for (const auto& m : s.mats) scale = std::max(scale, m.cwiseAbs().maxCoeff());
            EXPECT_LT(symmetry_defect(s), 1e-12 * scale) << "n=" << n;
        }
    }
}

TEST(Properties, BlochNormBound) {
    std::mt19937_64 rng(101);
    SimulationOptions opt;
    opt.dt = 0.05;
    opt.steps_forward = 100;
    opt.steps_backward = 20;
    for (int n = 2; n <= 4; ++n)
        for (int t = 0; t < 5; ++t) {
            const auto traj = simulate_trajectory(testsupport::random_params(n, rng, 2.0), build_generators(n), opt);
            for (const auto& m : traj.values)
                for (int k = 0; k < 3; ++k) EXPECT_LE(m.col(k).norm(), 1.0 + 1e-9);
            EXPECT_LT((traj.values[20] - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        }
}

TEST(Properties, GaugeLeavesDynamicsUnchanged) {
    std::mt19937_64 rng(102);
    SimulationOptions opt;
    opt.dt = 0.02;
    opt.steps_forward = 50;
    for (int n = 2; n <= 4; ++n) {
        const auto p = testsupport::random_params(n, rng);
        const auto b = build_generators(n);
        const auto [q, qb] = apply_gauge(p, b, testsupport::random_orthogonal(p.dim(), rng));
        EXPECT_LT((assemble_hamiltonian(p, b) - assemble_hamiltonian(q, qb)).cwiseAbs().maxCoeff(), 1e-10);
        const auto t0 = simulate_trajectory(p, b, opt);
        const auto t1 = simulate_trajectory(q, qb, opt);
        for (std::size_t i = 0; i < t0.size(); ++i) EXPECT_LT((t0.values[i] - t1.values[i]).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Properties, GramExtractionInvertsSecondOrder) {
    std::mt19937_64 rng(103);
    for (int n = 2; n <= 5; ++n)
        for (int t = 0; t < 20; ++t) {
            const auto p = testsupport::random_params(n, rng, 1.5);
            EXPECT_LT((extract_gamma_gram(addot_closed_form(p), p.alpha, n).g - gamma_gram(p).g).cwiseAbs().maxCoeff(),
                      1e-9);
        }
}

TEST(Properties, TwoLevelEnvironmentGaugeSoundness) {
    // For N = 2 every orthogonal frame is equivalent to the canonical one, so the
    // canonical estimate reproduces orders 1–3 for arbitrary γ.
    std::mt19937_64 rng(104);
    const auto alg = make_algebra(2);
    for (int t = 0; t < 20; ++t) {
        const auto p = testsupport::random_params(2, rng);
        DerivativeStack s;
        s.order = 3;
        s.mats = nested_derivative_matrices(p, alg.basis, 3);
        const auto r = reconstruct(symmetry_project(s), alg);
        for (double x : r.residuals) EXPECT_LT(x, 1e-8);

        auto rotated = p;
        rotated.gamma = p.gamma * testsupport::random_orthogonal(3, rng);
        EXPECT_LT((canonicalize_gamma(gamma_gram(rotated), 2) - r.gamma_canonical).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Properties, MinimumNormBetaHasNoNullComponent) {
    std::mt19937_64 rng(105);
    const auto alg = make_algebra(3);
    for (int t = 0; t < 20; ++t) {
        auto p = testsupport::random_params(3, rng);
        p.gamma = canonicalize_gamma(gamma_gram(p), 3);
        const auto b = extract_beta(tridot_closed_form(p, alg.f, alg.d), p.alpha, p.gamma, alg);
        // the canonical γ lives on Λ1..Λ3, so β4..β8 never enter order three
        for (int i = 3; i < 8; ++i) EXPECT_EQ(b.beta(i), 0.0);
        EXPECT_EQ(b.identifiable_rank, 3);
        EXPECT_LT((b.beta.head(3) - p.beta.head(3)).cwiseAbs().maxCoeff(), 1e-6);
    }
}
