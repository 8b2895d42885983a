// support.hpp: random generators and independent oracles for the tests

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "envprobe/dynamics.hpp"
#include "envprobe/model.hpp"
#include "envprobe/sun_algebra.hpp"

namespace testsupport {

using cd = std::complex<double>;

inline envprobe::HamiltonianParams random_params(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    envprobe::HamiltonianParams p = envprobe::HamiltonianParams::zeros(n);
    for (int i = 0; i < 3; ++i) p.alpha(i) = normal(rng);
    for (int i = 0; i < p.dim(); ++i) p.beta(i) = normal(rng);
    for (int c = 0; c < p.dim(); ++c)
        for (int r = 0; r < 3; ++r) p.gamma(r, c) = normal(rng);
    return p;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = normal(rng);
    return m;
}

inline Eigen::MatrixXd random_orthogonal(int m, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(m, m, rng));
    Eigen::MatrixXd q = qr.householderQ();
    // fix column signs so the distribution is uniform
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i)
        if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

// The eight Gell-Mann matrices, written out entry by entry.
inline std::vector<Eigen::Matrix3cd> gell_mann() {
    const cd i(0, 1);
    std::vector<Eigen::Matrix3cd> l(8, Eigen::Matrix3cd::Zero());
    l[0](0, 1) = l[0](1, 0) = 1;
    l[1](0, 1) = -i; l[1](1, 0) = i;
    l[2](0, 0) = 1; l[2](1, 1) = -1;
    l[3](0, 2) = l[3](2, 0) = 1;
    l[4](0, 2) = -i; l[4](2, 0) = i;
    l[5](1, 2) = l[5](2, 1) = 1;
    l[6](1, 2) = -i; l[6](2, 1) = i;
    const double s = 1.0 / std::sqrt(3.0);
    l[7](0, 0) = s; l[7](1, 1) = s; l[7](2, 2) = -2 * s;
    return l;
}

// Dense f by brute-force traces, 0-based.
inline std::vector<double> dense_structure_constants(const envprobe::SuNBasis& basis) {
    const int m = basis.dim();
    std::vector<double> f(static_cast<std::size_t>(m * m * m));
    const auto& g = basis.generators;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                const cd v = ((g[a] * g[b] - g[b] * g[a]) * g[c]).trace() / cd(0, 4);
                f[static_cast<std::size_t>((a * m + b) * m + c)] = v.real();
            }
    return f;
}

// dⁿ a_j^(k)/dtⁿ at t = 0 from the spectral form of the trajectory,
// a(t) = Re Σ_ab ρ̃_ab Σ̃_ba e^{-i(w_a − w_b)t}, differentiated term by term.
inline Eigen::Matrix3d spectral_derivative(const envprobe::HamiltonianParams& params,
                                           const envprobe::SuNBasis& basis, int order) {
    const Eigen::MatrixXcd h = envprobe::assemble_hamiltonian(params, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXd w = eig.eigenvalues();
    const Eigen::MatrixXcd& v = eig.eigenvectors();
    const int d = static_cast<int>(h.rows());
    Eigen::Matrix3d out;
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXcd rho = v.adjoint() * envprobe::initial_state(envprobe::kPreparations[k], params.n) * v;
        for (int j = 0; j < 3; ++j) {
            const Eigen::MatrixXcd s = v.adjoint() * envprobe::system_operator(j, params.n) * v;
            cd acc = 0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) acc += rho(a, b) * s(b, a) * std::pow(cd(0, -(w(a) - w(b))), order);
            out(j, k) = acc.real();
        }
    }
    return out;
}

} // namespace testsupport
