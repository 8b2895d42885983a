#include <gtest/gtest.h>

#include "envprobe/errors.hpp"
#include "envprobe/model.hpp"
#include "support.hpp"

using namespace envprobe;

TEST(Model, ZeroParamsGiveZeroHamiltonian) {
    for (int n = 2; n <= 4; ++n) {
        const auto h = assemble_hamiltonian(HamiltonianParams::zeros(n), build_generators(n));
        EXPECT_EQ(h.rows(), 2 * n);
        EXPECT_EQ(h.norm(), 0.0);
    }
}

TEST(Model, WorkedExampleHermitianTraceless) {
    const auto p = demo_qutrit_params();
    const auto h = assemble_hamiltonian(p, build_generators(3));
    EXPECT_EQ(h.rows(), 6);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
    EXPECT_LT(std::abs(h.trace()), 1e-15);
}

TEST(Model, MatchesExplicitKroneckerSum) {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 4; ++n) {
        const auto p = testsupport::random_params(n, rng);
        const auto b = build_generators(n);
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
        for (int j = 0; j < 3; ++j) h += p.alpha(j) * kron(pauli()[j], id);
        for (int k = 0; k < p.dim(); ++k) h += p.beta(k) * kron(Eigen::Matrix2cd::Identity(), b.generators[k]);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < p.dim(); ++k) h += p.gamma(j, k) * kron(pauli()[j], b.generators[k]);
        EXPECT_LT((assemble_hamiltonian(p, b) - 0.5 * h).norm(), 1e-12);
        const auto hh = assemble_hamiltonian(p, b);
        EXPECT_LT((hh - hh.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Model, KronOrderingIsSystemFirst) {
    // Σ_3 ⊗ 1: first N diagonal entries +1, last N −1
    const auto s = system_operator(2, 3);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(s(i, i).real(), 1.0);
        EXPECT_EQ(s(3 + i, 3 + i).real(), -1.0);
    }
}

TEST(Model, Validation) {
    auto p = HamiltonianParams::zeros(3);
    EXPECT_NO_THROW(p.validate());
    p.beta.resize(7);
    EXPECT_THROW(p.validate(), ConfigError);
    p = HamiltonianParams::zeros(3);
    p.gamma(1, 1) = std::nan("");
    EXPECT_THROW(p.validate(), ConfigError);
    p = HamiltonianParams::zeros(3);
    p.gamma.resize(3, 3);
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_THROW(assemble_hamiltonian(HamiltonianParams::zeros(2), build_generators(3)), std::invalid_argument);
}

TEST(Model, GammaGram) {
    EXPECT_LT((gamma_gram(demo_qutrit_params()).g - Eigen::Matrix3d::Identity()).norm(), 1e-15);
    EXPECT_EQ(gamma_gram(HamiltonianParams::zeros(3)).g.norm(), 0.0);
    std::mt19937_64 rng(3);
    const auto p = testsupport::random_params(4, rng);
    const Eigen::Matrix3d g = gamma_gram(p).g;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(g);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
    EXPECT_LT((g - g.transpose()).norm(), 1e-15);
}

TEST(Model, GaugeIdentity) {
    const auto p = demo_qutrit_params();
    const auto b = build_generators(3);
    const auto [q, qb] = apply_gauge(p, b, Eigen::MatrixXd::Identity(8, 8));
    EXPECT_EQ((q.beta - p.beta).norm(), 0.0);
    EXPECT_EQ((q.gamma - p.gamma).norm(), 0.0);
    for (int k = 0; k < 8; ++k) EXPECT_EQ((qb.generators[k] - b.generators[k]).norm(), 0.0);
}

TEST(Model, GaugePermutationAndRandomRotation) {
    std::mt19937_64 rng(5);
    for (int n = 2; n <= 4; ++n) {
        const auto p = testsupport::random_params(n, rng);
        const auto b = build_generators(n);
        const auto h = assemble_hamiltonian(p, b);
        Eigen::MatrixXd perm = Eigen::MatrixXd::Identity(p.dim(), p.dim());
        perm.row(0).swap(perm.row(1));
        const auto [pp, pb] = apply_gauge(p, b, perm);
        EXPECT_LT((assemble_hamiltonian(pp, pb) - h).norm(), 1e-14);

        const Eigen::MatrixXd r = testsupport::random_orthogonal(p.dim(), rng);
        const auto [rp, rb] = apply_gauge(p, b, r);
        EXPECT_LT((assemble_hamiltonian(rp, rb) - h).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((gamma_gram(rp).g - gamma_gram(p).g).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Model, GaugeRejectsNonOrthogonal) {
    const auto p = demo_qutrit_params();
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(8, 8);
    r(0, 0) = 1.1;
    EXPECT_THROW(apply_gauge(p, build_generators(3), r), std::invalid_argument);
}
