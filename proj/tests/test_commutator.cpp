#include <gtest/gtest.h>

#include "envprobe/commutator.hpp"
#include "envprobe/errors.hpp"
#include "support.hpp"

using namespace envprobe;

namespace {

Eigen::Matrix3d example_addot() {
    Eigen::Matrix3d m;
    m << -43.0 / 3, 2, 3,
         2, -34.0 / 3, 6,
         3, 6, -19.0 / 3;
    return m;
}

} // namespace

TEST(Commutator, NestedOracleMatchesSpectralOracle) {
    std::mt19937_64 rng(1);
    for (int n = 2; n <= 4; ++n) {
        const auto p = testsupport::random_params(n, rng, 0.7);
        const auto b = build_generators(n);
        const auto nested = nested_derivative_matrices(p, b, 6);
        for (int k = 1; k <= 6; ++k) {
            const Eigen::Matrix3d ref = testsupport::spectral_derivative(p, b, k);
            EXPECT_LT((nested[k - 1] - ref).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, ref.cwiseAbs().maxCoeff()))
                << "n=" << n << " order " << k;
        }
    }
}

TEST(Commutator, ZeroParams) {
    for (int n = 2; n <= 4; ++n)
        for (const auto& m : nested_derivative_matrices(HamiltonianParams::zeros(n), build_generators(n), 4))
            EXPECT_EQ(m.norm(), 0.0);
    const auto z = HamiltonianParams::zeros(3);
    const auto alg = make_algebra(3);
    EXPECT_EQ(adot_closed_form(z).norm(), 0.0);
    EXPECT_EQ(addot_closed_form(z).norm(), 0.0);
    EXPECT_EQ(tridot_closed_form(z, alg.f, alg.d).norm(), 0.0);
}

TEST(Commutator, WorkedExampleFirstOrder) {
    Eigen::Matrix3d expected;
    expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
    const auto p = demo_qutrit_params();
    EXPECT_LT((nested_derivative_matrix(p, build_generators(3), 1) - expected).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ((adot_closed_form(p) - expected).norm(), 0.0);
}

TEST(Commutator, WorkedExampleSecondOrder) {
    // hand evaluation: α_jα_k + (2/3)δ_jk − δ_jk(14 + 2)
    const auto p = demo_qutrit_params();
    EXPECT_LT((nested_derivative_matrix(p, build_generators(3), 2) - example_addot()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((addot_closed_form(p) - example_addot()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Commutator, WorkedExampleThirdOrder) {
    // v = α(14 + 2) + (4/3)α, f-term (2/3)β_p f_pjk for j,k ≤ 3 → only β_3 f_3jk
    const auto p = demo_qutrit_params();
    const auto alg = make_algebra(3);
    const Eigen::Matrix3d oracle = nested_derivative_matrix(p, alg.basis, 3);
    const Eigen::Matrix3d closed = tridot_closed_form(p, alg.f, alg.d);
    EXPECT_NEAR(oracle(0, 1), 158.0 / 3, 1e-8);
    EXPECT_NEAR(oracle(0, 2), -36.0, 1e-8);
    EXPECT_NEAR(oracle(1, 2), 18.0, 1e-8);
    EXPECT_LT((oracle + oracle.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((closed - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Commutator, ClosedFormsMatchOracle) {
    std::mt19937_64 rng(2);
    for (int n = 2; n <= 4; ++n) {
        const auto alg = make_algebra(n);
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = testsupport::random_params(n, rng);
            const auto m = nested_derivative_matrices(p, alg.basis, 3);
            EXPECT_LT((adot_closed_form(p) - m[0]).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LT((addot_closed_form(p) - m[1]).cwiseAbs().maxCoeff(), 1e-9);
            EXPECT_LT((tridot_closed_form(p, alg.f, alg.d) - m[2]).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
        }
    }
}

TEST(Commutator, ThirdOrderNeedsSymmetricTerm) {
    // Coupling outside an su(2) subalgebra: dropping d changes the result.
    auto p = HamiltonianParams::zeros(3);
    p.gamma(0, 7) = 1.0;
    p.gamma(1, 2) = 1.0;
    p.gamma(2, 0) = 0.5;
    p.gamma(0, 2) = 0.8;
    const auto alg = make_algebra(3);
    const Eigen::Matrix3d oracle = nested_derivative_matrix(p, alg.basis, 3);
    EXPECT_LT((tridot_closed_form(p, alg.f, alg.d) - oracle).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT((tridot_closed_form(p, alg.f, SymmetricConstants(3, {})) - oracle).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Commutator, LeviCivitaCrossIsOrdinaryCross) {
    const auto eps = CrossContraction::levi_civita();
    const Eigen::Vector3d x(1.0, -2.0, 0.5), y(0.3, 4.0, -1.0);
    const Eigen::VectorXd c = eps(Eigen::VectorXd(x), Eigen::VectorXd(y));
    EXPECT_LT((c - Eigen::VectorXd(x.cross(y))).norm(), 1e-15);
}

TEST(Commutator, StructureCrossOfBasisVectors) {
    const auto alg = make_algebra(3);
    const auto fx = CrossContraction::structure(alg.f);
    Eigen::VectorXd e4 = Eigen::VectorXd::Zero(8), e5 = Eigen::VectorXd::Zero(8);
    e4(3) = 1;
    e5(4) = 1;
    const Eigen::VectorXd c = fx(e4, e5);  // c_i = f_i45
    EXPECT_NEAR(c(2), 0.5, 1e-12);
    EXPECT_NEAR(c(7), std::sqrt(3.0) / 2, 1e-12);
    EXPECT_NEAR(c.norm(), 1.0, 1e-12);
}

TEST(Commutator, ReplacementRules) {
    EXPECT_LT(verify_replacement_rules(make_algebra(2), 100, 7), 1e-10);
    EXPECT_LT(verify_replacement_rules(make_algebra(3), 50, 8), 1e-9);
    EXPECT_LT(verify_replacement_rules(make_algebra(4), 100, 9), 1e-9);
    EXPECT_THROW(verify_replacement_rules(make_algebra(2), 0, 1), ConfigError);
}

TEST(Commutator, ReplacementRuleWithEqualVectors) {
    // X = Y: [X·Σ, X×Σ] = −2i X×X×Σ, which is not zero as an operator statement
    const auto eps = CrossContraction::levi_civita();
    OpVec sigma(pauli().begin(), pauli().end());
    const Eigen::Vector3d x(0.4, -1.2, 0.9);
    OpVec xs;
    for (int i = 0; i < 3; ++i) xs.push_back(x(i) * Eigen::MatrixXcd::Identity(2, 2));
    Eigen::MatrixXcd xdot = Eigen::MatrixXcd::Zero(2, 2);
    for (int i = 0; i < 3; ++i) xdot += x(i) * sigma[i];
    const OpVec xcs = eps(xs, sigma);
    const OpVec rhs = eps(xs, xcs);
    double worst = 0.0, size = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd lhs = xdot * xcs[i] - xcs[i] * xdot;
        worst = std::max(worst, (lhs + std::complex<double>(0, 2) * rhs[i]).norm());
        size = std::max(size, rhs[i].norm());
    }
    EXPECT_LT(worst, 1e-12);
    EXPECT_GT(size, 0.1);
}

TEST(Commutator, DoubleCommutator) {
    EXPECT_EQ(verify_double_commutator(HamiltonianParams::zeros(3), make_algebra(3)), 0.0);
    EXPECT_LT(verify_double_commutator(demo_qutrit_params(), make_algebra(3)), 1e-9);
    std::mt19937_64 rng(4);
    for (int n = 2; n <= 4; ++n) {
        const auto alg = make_algebra(n);
        for (int t = 0; t < 10; ++t) EXPECT_LT(verify_double_commutator(testsupport::random_params(n, rng), alg), 1e-9);
    }
}

TEST(Commutator, TripleCommutator) {
    const auto zero = verify_triple_commutator(HamiltonianParams::zeros(2), make_algebra(2));
    EXPECT_EQ(zero.total, 0.0);
    const auto example = verify_triple_commutator(demo_qutrit_params(), make_algebra(3));
    EXPECT_LT(example.total, 1e-8);
    std::mt19937_64 rng(6);
    for (int n = 2; n <= 3; ++n) {
        const auto alg = make_algebra(n);
        for (int t = 0; t < 10; ++t) {
            const auto c = verify_triple_commutator(testsupport::random_params(n, rng), alg);
            EXPECT_LT(c.total, 1e-8);
            for (double piece : c.pieces) EXPECT_LT(piece, 1e-8);
        }
    }
}

TEST(Commutator, TripleCommutatorDetectsWrongConstants) {
    // a corrupted f breaks the assembled expansion
    const auto good = make_algebra(3);
    SuNAlgebra bad = good;
    auto canon = good.f.canonical();
    canon[{4, 5, 8}] *= 0.5;
    bad.f = StructureConstants(3, canon);
    std::mt19937_64 rng(8);
    const auto p = testsupport::random_params(3, rng);
    EXPECT_GT(verify_triple_commutator(p, bad).total, 1e-3);
    EXPECT_GT(verify_double_commutator(p, bad), 1e-3);
}

TEST(Commutator, ImaginaryResidueIsRejected) {
    // a complex-scaled "generator" makes Tr(Λ₁Λ₁) complex from second order on
    auto alg = make_algebra(2);
    alg.basis.generators[0] *= std::complex<double>(1.0, 0.5);
    auto p = HamiltonianParams::zeros(2);
    p.alpha = Eigen::Vector3d(1.0, 0.3, 0.0);
    p.gamma(0, 0) = 1.0;
    EXPECT_THROW(nested_derivative_matrices(p, alg.basis, 3), NumericalError);
}
