// model.hpp: qubit–environment Hamiltonian parameters and the assembled 2N×2N matrix
//
// H = ½ (α_j Σ_j ⊗ 1 + 1 ⊗ β_k Λ_k + γ_jk Σ_j ⊗ Λ_k), ħ = 1.
// Tensor ordering is system ⊗ environment everywhere: joint index = s·N + e.

#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "envprobe/sun_algebra.hpp"

namespace envprobe {

using GammaMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

struct HamiltonianParams {
    int n{0};
    Eigen::Vector3d alpha{Eigen::Vector3d::Zero()};
    Eigen::VectorXd beta;   // N²-1
    GammaMatrix gamma;      // 3 × (N²-1), row i is γ̃_i

    int dim() const noexcept { return n * n - 1; }

    static HamiltonianParams zeros(int n);

    // Throws ConfigError on wrong shapes, n < 2 or non-finite entries.
    void validate() const;
};

// g_ij = γ̃_i · γ̃_j
struct GammaGram {
    Eigen::Matrix3d g{Eigen::Matrix3d::Zero()};
};

// α=(1,2,3), β=(1,2,1,1,1,1,1,0.1), γ_11=γ_22=γ_33=1: the N=3 demonstration
// model used by the verify pipeline and the acceptance suite.
HamiltonianParams demo_qutrit_params();

const std::array<Eigen::Matrix2cd, 3>& pauli();

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Σ_j ⊗ 1_N
Eigen::MatrixXcd system_operator(int j, int n);

Eigen::MatrixXcd assemble_hamiltonian(const HamiltonianParams& params, const SuNBasis& basis);

GammaGram gamma_gram(const HamiltonianParams& params);

// Rotate the environment basis Λ'_k = Σ_l r_kl Λ_l together with β' = rβ and
// γ' = γ rᵀ. The assembled H is unchanged. Throws std::invalid_argument when r
// is not orthogonal within 1e-10.
std::pair<HamiltonianParams, SuNBasis> apply_gauge(const HamiltonianParams& params,
                                                   const SuNBasis& basis,
                                                   const Eigen::MatrixXd& r);

} // namespace envprobe
