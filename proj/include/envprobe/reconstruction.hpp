// reconstruction.hpp: Hamiltonian parameters from derivative matrices at t = 0
//
// Orders 1–3 give α, the Gram matrix of the γ̃ rows and as many β combinations as
// the third-order coefficient map has rank. γ is only defined up to an orthogonal
// rotation of the environment generators, so it is reported in a canonical frame.
// Higher orders are used by a least-squares fit over all parameters.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "envprobe/derivatives.hpp"
#include "envprobe/model.hpp"
#include "envprobe/sun_algebra.hpp"

namespace envprobe {

// α_l = −½ ε_ljk ȧ_jk. Throws DataError if ȧ is not antisymmetric within 1e-6.
Eigen::Vector3d extract_alpha(const Eigen::Matrix3d& adot);

// Inverts the second-order relation for γ̃_j·γ̃_k. Slightly negative eigenvalues
// (above −1e-6·max(1, |G|)) are clipped to zero; anything below throws DataError.
GammaGram extract_gamma_gram(const Eigen::Matrix3d& addot, const Eigen::Vector3d& alpha, int n);

// Pivot order of the factorization: largest remaining diagonal first, near-ties
// (1e-12 relative) go to the lowest index.
struct PivotedFactor {
    Eigen::Matrix3d l{Eigen::Matrix3d::Zero()};   // l lᵀ = G, row pivots[k] supported on columns 0..k
    std::array<int, 3> pivots{0, 1, 2};
    int rank{0};
};

PivotedFactor pivoted_cholesky(const GammaGram& gram);

// γ in the canonical frame: the pivoted factor embedded in the first three
// generator directions, zero elsewhere. Requires n >= 2.
GammaMatrix canonicalize_gamma(const GammaGram& gram, int n);

struct BetaEstimate {
    Eigen::VectorXd beta;
    int identifiable_rank{0};
    // Orthonormal columns spanning the β directions the third order does not constrain.
    Eigen::MatrixXd unidentified;
};

// Solves the β part of the third-order relation by minimum-norm least squares
// (singular values below 1e-8·max(1, σ_max) are treated as zero). Generators that
// do not enter the map at all get β = 0 exactly.
BetaEstimate extract_beta(const Eigen::Matrix3d& trdot, const Eigen::Vector3d& alpha, const GammaMatrix& gamma,
                          const SuNAlgebra& algebra);

struct FitResult {
    HamiltonianParams params;
    double objective{0.0};          // Σ over orders of squared entry differences
    double initial_objective{0.0};
    int iterations{0};
    bool converged{false};
    std::string message;
    std::vector<double> objective_history;  // accepted iterations only
};

struct ReconstructionReport {
    int n{0};
    Eigen::Vector3d alpha_est{Eigen::Vector3d::Zero()};
    GammaGram gram_est;
    GammaMatrix gamma_canonical;
    Eigen::VectorXd beta_est;
    int beta_identifiable_rank{0};
    bool underdetermined{true};
    int orders_used{3};
    // residuals[n-1] = ||stack[n] − prediction(estimate)[n]||_F for every order in the stack
    std::vector<double> residuals;
    std::optional<FitResult> fit;

    HamiltonianParams closed_form_estimate() const;
    // Fit parameters when a fit was run, the closed-form estimate otherwise.
    HamiltonianParams estimate() const;
};

// Closed-form reconstruction from a projected stack of order >= 3.
ReconstructionReport reconstruct(const DerivativeStack& stack, const SuNAlgebra& algebra);

// Least-squares match of orders 1..max_order over (α, β, γ), with γ held in the
// canonical pattern of the initial guess (lower bound 0 on the pivot entries).
// Stops on relative objective decrease < 1e-10 or after 500 iterations.
FitResult fit_parameters(const DerivativeStack& stack, const SuNAlgebra& algebra, const HamiltonianParams& init,
                         int max_order);

// Replaces report.fit and the residuals with those of a fit up to max_order.
void refine_with_fit(ReconstructionReport& report, const DerivativeStack& stack, const SuNAlgebra& algebra,
                     int max_order);

// ceil((4N² − 1) / 4.5): orders needed if each one pins down 4.5 parameters on average.
int required_order(int n);

} // namespace envprobe
