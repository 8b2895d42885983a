// sun_algebra.hpp: SU(N) generator bases, structure constants and closure checks
//
// Generators follow the generalized Gell-Mann convention: Tr(Λ_i Λ_j) = 2 δ_ij and
// [Λ_i, Λ_j] = 2i f_ijk Λ_k. For every column j = 2..N the symmetric/antisymmetric
// pairs (1,j), (2,j), ..., (j-1,j) come first, followed by the diagonal generator
// that lands at index j²-1. For N = 3 this reproduces the standard Λ1..Λ8.

#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace envprobe {

struct SuNBasis {
    int n{0};
    std::vector<Eigen::MatrixXcd> generators;

    int dim() const noexcept { return n * n - 1; }
};

// One stored tensor entry, 0-based indices.
struct TensorEntry {
    int i, j, k;
    double value;
};

// Sparse, completely antisymmetric f_ijk. Only canonical triples i<j<k are
// stored; other orderings are recovered with the permutation sign.
class StructureConstants {
public:
    StructureConstants() = default;
    StructureConstants(int n, std::map<std::array<int, 3>, double> canonical);

    int n() const noexcept { return n_; }
    int dim() const noexcept { return n_ * n_ - 1; }

    // 1-based lookup for any index order.
    double operator()(int i, int j, int k) const;

    // Canonical entries keyed by 1-based (i,j,k), i<j<k.
    const std::map<std::array<int, 3>, double>& canonical() const noexcept { return canonical_; }

    // All nonzero entries over every index permutation, 0-based. This is the
    // form the contraction kernels iterate over.
    const std::vector<TensorEntry>& expanded() const noexcept { return expanded_; }

private:
    int n_{0};
    std::map<std::array<int, 3>, double> canonical_;
    std::vector<TensorEntry> expanded_;
};

// Sparse, completely symmetric d_ijk = Tr({Λ_i,Λ_j} Λ_k) / 4, canonical i<=j<=k.
// Needed by the third-order closed form: Tr(Λ_a Λ_b Λ_c) = 2(d_abc + i f_abc).
class SymmetricConstants {
public:
    SymmetricConstants() = default;
    SymmetricConstants(int n, std::map<std::array<int, 3>, double> canonical);

    int n() const noexcept { return n_; }
    double operator()(int i, int j, int k) const; // 1-based
    const std::map<std::array<int, 3>, double>& canonical() const noexcept { return canonical_; }
    const std::vector<TensorEntry>& expanded() const noexcept { return expanded_; }

private:
    int n_{0};
    std::map<std::array<int, 3>, double> canonical_;
    std::vector<TensorEntry> expanded_;
};

// Throws ConfigError for n < 2.
SuNBasis build_generators(int n);

// f_ijk = Tr([Λ_i,Λ_j] Λ_k) / (4i); entries with |f| <= 1e-12 are dropped.
StructureConstants compute_structure_constants(const SuNBasis& basis);

SymmetricConstants compute_symmetric_constants(const SuNBasis& basis);

// max_(i,j) || [Λ_i,Λ_j] - 2i Σ_k f_ijk Λ_k ||_F
double closure_residual(const SuNBasis& basis, const StructureConstants& f);

// max over (a,b,c,e) of |f_ade f_bcd + f_bde f_cad + f_cde f_abd|
double jacobi_residual(const StructureConstants& f);

// Largest deviation from Hermiticity, tracelessness and Tr(Λ_iΛ_j) = 2δ_ij.
double basis_defect(const SuNBasis& basis);

// Basis plus both invariant tensors, built once and shared read-only.
struct SuNAlgebra {
    SuNBasis basis;
    StructureConstants f;
    SymmetricConstants d;

    int n() const noexcept { return basis.n; }
    int dim() const noexcept { return basis.dim(); }
};

SuNAlgebra make_algebra(int n);

} // namespace envprobe
