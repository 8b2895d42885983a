// derivatives.hpp: finite-difference derivative matrices at t = 0 and symmetry projection

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "envprobe/dynamics.hpp"

namespace envprobe {

// mats[n-1](j, k) ≈ dⁿ a_j^(k) / dtⁿ at t = 0.
struct DerivativeStack {
    int order{0};
    std::vector<Eigen::Matrix3d> mats;
    bool projected{false};

    const Eigen::Matrix3d& operator[](int n) const { return mats.at(static_cast<std::size_t>(n - 1)); }
};

// Finite-difference weights for the `deriv`-th derivative at 0 on the given
// offsets (in units of the grid step), by Fornberg's recursion.
std::vector<double> fd_weights(int deriv, std::span<const double> offsets);

// Halfwidth of the narrowest central stencil of the given (even) accuracy order.
int central_halfwidth(int deriv, int accuracy);

// Derivative matrices of orders 1..order at t = 0.
//
// If the trajectory holds at least `halfwidth` samples on both sides of t = 0,
// every order n uses the central stencil of `accuracy` (error O(dt^accuracy)),
// which spans ceil(n/2) + accuracy/2 - 1 points per side; that halfwidth may not
// exceed `halfwidth`. Otherwise forward one-sided stencils on n + accuracy
// points are used, so data recorded only for t >= 0 still works.
//
// Throws DataError when t = 0 is not sampled, the grid is not uniform, or there
// are not enough samples; ConfigError for inconsistent order/halfwidth/accuracy.
DerivativeStack estimate_derivatives(const Trajectory& traj, int order, int halfwidth = 3, int accuracy = 2);

// Odd orders → (A − Aᵀ)/2, even orders → (A + Aᵀ)/2. Throws std::invalid_argument
// if the stack is already projected.
DerivativeStack symmetry_project(const DerivativeStack& stack);

// Largest |A ∓ Aᵀ|/2 entry that projection would remove.
double symmetry_defect(const DerivativeStack& stack);

} // namespace envprobe
