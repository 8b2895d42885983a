#include <gtest/gtest.h>

#include "envprobe/commutator.hpp"
#include "envprobe/errors.hpp"
#include "envprobe/io.hpp"
#include "support.hpp"

using namespace envprobe;

TEST(IO, ParamsRoundTrip) {
    std::mt19937_64 rng(1);
    const auto p = testsupport::random_params(3, rng);
    const auto q = io::params_from_json_text(io::params_to_json_text(p));
    EXPECT_EQ(q.n, 3);
    EXPECT_EQ((q.alpha - p.alpha).norm(), 0.0);
    EXPECT_EQ((q.beta - p.beta).norm(), 0.0);
    EXPECT_EQ((q.gamma - p.gamma).norm(), 0.0);
}

TEST(IO, ParamsErrors) {
    EXPECT_THROW(io::params_from_json_text("{"), DataError);
    EXPECT_THROW(io::params_from_json_text(R"({"n":2,"alpha":[0,0,0],"beta":[0,0,0]})"), DataError);
    EXPECT_THROW(io::params_from_json_text(
                     R"({"n":2,"alpha":[0,0,0],"beta":[0,0,0],"gamma":[[0,0,0],[0,0,0],[0,0,0]],"x":1})"),
                 DataError);
    EXPECT_THROW(io::params_from_json_text(
                     R"({"n":2,"alpha":[0,0,"a"],"beta":[0,0,0],"gamma":[[0,0,0],[0,0,0],[0,0,0]]})"),
                 DataError);
    EXPECT_THROW(io::params_from_json_text(
                     R"({"n":3,"alpha":[0,0,0],"beta":[0,0,0],"gamma":[[0,0,0],[0,0,0],[0,0,0]]})"),
                 ConfigError);
}

TEST(IO, TrajectoryRoundTripIsExact) {
    SimulationOptions opt;
    opt.steps_forward = 30;
    opt.steps_backward = 3;
    const auto traj = simulate_trajectory(demo_qutrit_params(), build_generators(3), opt);
    const std::string csv = io::trajectory_to_csv(traj);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,a1_k1,a2_k1,a3_k1,a1_k2,a2_k2,a3_k2,a1_k3,a2_k3,a3_k3");
    const auto back = io::trajectory_from_csv(csv, 3);
    ASSERT_EQ(back.size(), traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_EQ(back.times[i], traj.times[i]);
        EXPECT_EQ((back.values[i] - traj.values[i]).norm(), 0.0);
    }
    EXPECT_EQ(io::trajectory_to_csv(back), csv);
}

TEST(IO, TrajectoryErrors) {
    EXPECT_THROW(io::trajectory_from_csv("", 3), DataError);
    EXPECT_THROW(io::trajectory_from_csv("time,x\n0,1\n", 3), DataError);
    const std::string header = "t,a1_k1,a2_k1,a3_k1,a1_k2,a2_k2,a3_k2,a1_k3,a2_k3,a3_k3\n";
    EXPECT_THROW(io::trajectory_from_csv(header + "0,1,0,0,0,1,0,0,0\n0.001,1,0,0,0,1,0,0,0,1\n", 3), DataError);
    EXPECT_THROW(io::trajectory_from_csv(header + "0,1,0,0,0,1,0,0,0,x\n0.001,1,0,0,0,1,0,0,0,1\n", 3), DataError);
    EXPECT_NO_THROW(io::trajectory_from_csv(header + "0,1,0,0,0,1,0,0,0,1\r\n0.001,1,0,0,0,1,0,0,0,1\r\n", 3));
}

TEST(IO, DerivativesRoundTrip) {
    DerivativeStack s;
    s.order = 3;
    s.mats = nested_derivative_matrices(demo_qutrit_params(), build_generators(3), 3);
    const auto back = io::derivatives_from_json_text(io::derivatives_to_json_text(s));
    EXPECT_EQ(back.order, 3);
    EXPECT_FALSE(back.projected);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ((back[k] - s[k]).norm(), 0.0);
    EXPECT_THROW(io::derivatives_from_json_text(R"({"order":2,"projected":true,"matrices":[[1,2,3,4,5,6,7,8,9]]})"),
                 DataError);
    EXPECT_THROW(io::derivatives_from_json_text(R"({"order":"x","projected":true,"matrices":[]})"), DataError);
}

TEST(IO, AlgebraRoundTrip) {
    for (int n = 2; n <= 4; ++n) {
        const auto alg = make_algebra(n);
        const auto back = io::algebra_from_json_text(io::algebra_to_json_text(alg));
        EXPECT_EQ(back.n(), n);
        EXPECT_LT(closure_residual(back.basis, back.f), 1e-10);
        EXPECT_EQ(back.f.canonical(), alg.f.canonical());
        EXPECT_EQ(back.d.canonical(), alg.d.canonical());
    }
    const std::string su3 = io::algebra_to_json_text(make_algebra(3));
    EXPECT_NE(su3.find("0.8660254037844"), std::string::npos);
}

TEST(IO, ReportContainsAllFields) {
    const auto alg = make_algebra(3);
    DerivativeStack s;
    s.order = 3;
    s.mats = nested_derivative_matrices(demo_qutrit_params(), alg.basis, 3);
    const auto r = reconstruct(symmetry_project(s), alg);
    const std::string text = io::report_to_json_text(r);
    for (const char* key : {"alpha_est", "gram_est", "gamma_canonical", "beta_est", "beta_identifiable_rank",
                            "underdetermined", "orders_used", "residuals", "fit", "estimate"})
        EXPECT_NE(text.find(std::string("\"") + key + "\""), std::string::npos) << key;
}
