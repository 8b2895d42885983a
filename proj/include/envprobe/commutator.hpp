// commutator.hpp: derivative matrices from nested commutators, their closed forms,
// and matrix-level checks of the vector-calculus commutator identities.
//
// Sign convention: dⁿ a_j^(k)/dtⁿ at t = 0 is Tr[(ρ₀^(k) ⊗ 1/N) (i ad_H)ⁿ (Σ_j ⊗ 1)]
// with ad_H(X) = [H, X].

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "envprobe/model.hpp"
#include "envprobe/sun_algebra.hpp"

namespace envprobe {

// Ground-truth derivative matrix of the given order (>= 1). Throws
// NumericalError if any trace has an imaginary residue above 1e-9 (relative).
Eigen::Matrix3d nested_derivative_matrix(const HamiltonianParams& params, const SuNBasis& basis, int order);

// Orders 1..max_order in one pass.
std::vector<Eigen::Matrix3d> nested_derivative_matrices(const HamiltonianParams& params, const SuNBasis& basis,
                                                        int max_order);

// ȧ_jk = −ε_jkl α_l
Eigen::Matrix3d adot_closed_form(const HamiltonianParams& params);

// ä_jk = α_jα_k + c γ̃_j·γ̃_k − δ_jk(|α|² + c Σ_i|γ̃_i|²), c = 2/N.
// The factor c is Tr(Λ_aΛ_b)/N for the maximally mixed environment.
Eigen::Matrix3d addot_closed_form(const HamiltonianParams& params);

// a⃛_jk = ε_jkl [α_l(|α|² + c Σ_i|γ̃_i|²) + 2c α_m γ̃_m·γ̃_l + c Σ_m d_abe γ_ma γ_mb γ_le]
//        + c f_plm β_p γ_jl γ_km,  c = 2/N.
// The d-term is the real part of Tr(Λ_aΛ_bΛ_e)/N; it vanishes for N = 2 and
// whenever γ lives in an su(2) subalgebra.
Eigen::Matrix3d tridot_closed_form(const HamiltonianParams& params, const StructureConstants& f,
                                   const SymmetricConstants& d);

// ---------------------------------------------------------------------------
// Vector notation with operator-valued components.

using OpVec = std::vector<Eigen::MatrixXcd>;

// [X × Y]_i = C_ijk X_j Y_k with C = ε (3-vectors) or C = f ((N²−1)-vectors).
// Operator components multiply in written order, X_j · Y_k.
class CrossContraction {
public:
    static CrossContraction levi_civita();
    static CrossContraction structure(const StructureConstants& f);

    int dim() const noexcept { return dim_; }

    OpVec operator()(const OpVec& x, const OpVec& y) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    CrossContraction(int dim, std::vector<TensorEntry> entries) : dim_(dim), entries_(std::move(entries)) {}

    int dim_;
    std::vector<TensorEntry> entries_;
};

// Operator vectors on the joint 2N-dimensional space.
struct JointOperators {
    int n{0};
    OpVec sigma;   // Σ_j ⊗ 1
    OpVec lambda;  // 1 ⊗ Λ_k
    Eigen::MatrixXcd identity;

    explicit JointOperators(const SuNBasis& basis);

    // (x_i · 1) for a numeric vector
    OpVec scalar(const Eigen::VectorXd& x) const;
};

// [γ·V]_i = γ_ik V_k (3-vector from an (N²−1)-vector)
OpVec gamma_dot(const GammaMatrix& gamma, const OpVec& v);
// [V·γ]_l = V_j γ_jl ((N²−1)-vector from a 3-vector)
OpVec dot_gamma(const OpVec& v, const GammaMatrix& gamma);

// Checks, on random numeric X, Y (and random γ and bilinear h):
//   [X·Σ, Y×Σ] = −2i Y×X×Σ           (2×2 Pauli matrices)
//   [X·Λ, Y×Λ] = −2i Y×X×Λ           (N×N generators, f-cross)
//   [Σ·γ·Λ, h(Σ,Λ)] = −2i h(γ·Λ×Σ, Λ) − 2i h(Σ, Σ·γ×Λ)
// Returns the largest Frobenius residual.
double verify_replacement_rules(const SuNAlgebra& algebra, int trials, std::uint64_t seed);

// Frobenius residual (over j = 1..3) between the six-term vector expansion of
// i[H, i[H, Σ]] and the direct nested commutator.
double verify_double_commutator(const HamiltonianParams& params, const SuNAlgebra& algebra);

struct TripleCommutatorCheck {
    double total{0.0};                 // sum of all pieces vs i[H,i[H,i[H,Σ]]]
    std::array<double, 6> pieces{};    // each piece vs i[H, term_p]
};

// The triple commutator assembled piecewise from the six double-commutator
// terms, each expanded by the replacement rules.
TripleCommutatorCheck verify_triple_commutator(const HamiltonianParams& params, const SuNAlgebra& algebra);

} // namespace envprobe
