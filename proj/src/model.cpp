// model.cpp: Hamiltonian assembly and gauge transformations

#include "envprobe/model.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "envprobe/errors.hpp"

namespace envprobe {

HamiltonianParams HamiltonianParams::zeros(int n) {
    if (n < 2) throw ConfigError("HamiltonianParams: dimension must be >= 2, got " + std::to_string(n));
    HamiltonianParams p;
    p.n = n;
    p.beta = Eigen::VectorXd::Zero(n * n - 1);
    p.gamma = GammaMatrix::Zero(3, n * n - 1);
    return p;
}

void HamiltonianParams::validate() const {
    if (n < 2) throw ConfigError("HamiltonianParams: dimension must be >= 2, got " + std::to_string(n));
    const int m = dim();
    if (beta.size() != m) {
        throw ConfigError("HamiltonianParams: beta needs " + std::to_string(m) + " entries, got " +
                          std::to_string(beta.size()));
    }
    if (gamma.cols() != m) {
        throw ConfigError("HamiltonianParams: gamma needs 3 x " + std::to_string(m) + " entries, got 3 x " +
                          std::to_string(gamma.cols()));
    }
    if (!alpha.allFinite() || !beta.allFinite() || !gamma.allFinite()) {
        throw ConfigError("HamiltonianParams: non-finite parameter value");
    }
}

HamiltonianParams demo_qutrit_params() {
    HamiltonianParams p = HamiltonianParams::zeros(3);
    p.alpha << 1.0, 2.0, 3.0;
    p.beta << 1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1;
    p.gamma(0, 0) = 1.0;
    p.gamma(1, 1) = 1.0;
    p.gamma(2, 2) = 1.0;
    return p;
}

const std::array<Eigen::Matrix2cd, 3>& pauli() {
    static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
        using cd = std::complex<double>;
        std::array<Eigen::Matrix2cd, 3> s;
        s[0] << 0.0, 1.0, 1.0, 0.0;
        s[1] << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
        s[2] << 1.0, 0.0, 0.0, -1.0;
        return s;
    }();
    return sigma;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd system_operator(int j, int n) {
    return kron(pauli()[static_cast<std::size_t>(j)], Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd assemble_hamiltonian(const HamiltonianParams& params, const SuNBasis& basis) {
    params.validate();
    if (params.n != basis.n) {
        throw std::invalid_argument("assemble_hamiltonian: params.n=" + std::to_string(params.n) +
                                    " but basis.n=" + std::to_string(basis.n));
    }
    const int n = params.n;
    const int m = params.dim();
    const auto& sigma = pauli();

    // environment pieces: β·Λ and the three γ̃_j·Λ
    Eigen::MatrixXcd beta_lambda = Eigen::MatrixXcd::Zero(n, n);
    std::array<Eigen::MatrixXcd, 3> gamma_lambda;
    gamma_lambda.fill(Eigen::MatrixXcd::Zero(n, n));
    for (int k = 0; k < m; ++k) {
        beta_lambda += params.beta(k) * basis.generators[k];
        for (int j = 0; j < 3; ++j) gamma_lambda[j] += params.gamma(j, k) * basis.generators[k];
    }

    Eigen::Matrix2cd alpha_sigma = Eigen::Matrix2cd::Zero();
    for (int j = 0; j < 3; ++j) alpha_sigma += params.alpha(j) * sigma[j];

    const Eigen::MatrixXcd id_n = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd h = kron(alpha_sigma, id_n) + kron(Eigen::Matrix2cd::Identity(), beta_lambda);
    for (int j = 0; j < 3; ++j) h += kron(sigma[j], gamma_lambda[j]);
    return 0.5 * h;
}

GammaGram gamma_gram(const HamiltonianParams& params) {
    params.validate();
    GammaGram gram;
    gram.g = params.gamma * params.gamma.transpose();
    return gram;
}

std::pair<HamiltonianParams, SuNBasis> apply_gauge(const HamiltonianParams& params,
                                                   const SuNBasis& basis,
                                                   const Eigen::MatrixXd& r) {
    params.validate();
    const int m = params.dim();
    if (params.n != basis.n) throw std::invalid_argument("apply_gauge: params and basis differ in N");
    if (r.rows() != m || r.cols() != m) throw std::invalid_argument("apply_gauge: r must be (N²-1)×(N²-1)");
    const double defect = (r * r.transpose() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw std::invalid_argument("apply_gauge: r is not orthogonal (defect " + std::to_string(defect) + ")");
    }

    HamiltonianParams out = params;
    out.beta = r * params.beta;
    out.gamma = params.gamma * r.transpose();

    SuNBasis rotated;
    rotated.n = basis.n;
    rotated.generators.assign(static_cast<std::size_t>(m), Eigen::MatrixXcd::Zero(basis.n, basis.n));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            if (r(k, l) != 0.0) rotated.generators[k] += r(k, l) * basis.generators[l];
    return {out, rotated};
}

} // namespace envprobe
