// derivatives.cpp: Fornberg stencils and derivative estimation

#include "envprobe/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envprobe/errors.hpp"

namespace envprobe {

std::vector<double> fd_weights(int deriv, std::span<const double> offsets) {
    const int points = static_cast<int>(offsets.size());
    if (deriv < 0 || points <= deriv) {
        throw std::invalid_argument("fd_weights: need more than " + std::to_string(deriv) + " points");
    }
    // c(i, k): weight of point i for derivative k
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(points, deriv + 1);
    double c1 = 1.0;
    double c4 = offsets[0];
    c(0, 0) = 1.0;
    for (int i = 1; i < points; ++i) {
        const int mn = std::min(i, deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = offsets[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) w[static_cast<std::size_t>(i)] = c(i, deriv);
    return w;
}

int central_halfwidth(int deriv, int accuracy) {
    return (deriv + 1) / 2 + accuracy / 2 - 1;
}

namespace {

double uniform_step(const Trajectory& traj) {
    const auto& t = traj.times;
    if (t.size() < 2) throw DataError("trajectory needs at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw DataError("trajectory times must be increasing");
    const double scale = std::max({std::abs(t.front()), std::abs(t.back()), dt});
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double expected = t.front() + static_cast<double>(i) * dt;
        if (std::abs(t[i] - expected) > 1e-12 * scale) {
            throw DataError("non-uniform time grid at sample " + std::to_string(i) + " (t=" +
                            std::to_string(t[i]) + ")");
        }
    }
    return dt;
}

} // namespace

DerivativeStack estimate_derivatives(const Trajectory& traj, int order, int halfwidth, int accuracy) {
    if (order < 1) throw ConfigError("derivative order must be >= 1");
    if (halfwidth < 1) throw ConfigError("stencil halfwidth must be >= 1");
    if (accuracy < 2 || accuracy % 2 != 0) throw ConfigError("stencil accuracy must be an even number >= 2");
    if (traj.values.size() != traj.times.size()) throw DataError("trajectory times and values differ in length");

    const double dt = uniform_step(traj);
    const auto zero = traj.zero_index();
    if (!zero) throw DataError("trajectory has no sample at t = 0");
    const int back = static_cast<int>(*zero);
    const int forward = static_cast<int>(traj.size()) - 1 - back;

    const bool central = back >= halfwidth && forward >= halfwidth;
    if (central) {
        const int needed = central_halfwidth(order, accuracy);
        if (needed > halfwidth) {
            throw ConfigError("derivative order " + std::to_string(order) + " at accuracy " +
                              std::to_string(accuracy) + " needs halfwidth >= " + std::to_string(needed));
        }
    } else if (forward < order + accuracy - 1) {
        throw DataError("insufficient samples around t = 0: need " + std::to_string(halfwidth) +
                        " on each side (have " + std::to_string(back) + " before, " + std::to_string(forward) +
                        " after) or " + std::to_string(order + accuracy - 1) + " after for one-sided stencils");
    }

    DerivativeStack stack;
    stack.order = order;
    for (int n = 1; n <= order; ++n) {
        std::vector<double> offsets;
        if (central) {
            const int w = central_halfwidth(n, accuracy);
            for (int s = -w; s <= w; ++s) offsets.push_back(s);
        } else {
            for (int s = 0; s < n + accuracy; ++s) offsets.push_back(s);
        }
        const std::vector<double> weights = fd_weights(n, offsets);
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        for (std::size_t p = 0; p < offsets.size(); ++p) {
            m += weights[p] * traj.values[static_cast<std::size_t>(back + static_cast<int>(offsets[p]))];
        }
        stack.mats.push_back(m / std::pow(dt, n));
    }
    return stack;
}

DerivativeStack symmetry_project(const DerivativeStack& stack) {
    if (stack.projected) throw std::invalid_argument("symmetry_project: stack is already projected");
    DerivativeStack out = stack;
    for (int n = 1; n <= stack.order; ++n) {
        const Eigen::Matrix3d& a = stack[n];
        out.mats[static_cast<std::size_t>(n - 1)] =
            (n % 2 == 1) ? Eigen::Matrix3d(0.5 * (a - a.transpose())) : Eigen::Matrix3d(0.5 * (a + a.transpose()));
    }
    out.projected = true;
    return out;
}

double symmetry_defect(const DerivativeStack& stack) {
    double worst = 0.0;
    for (int n = 1; n <= stack.order; ++n) {
        const Eigen::Matrix3d& a = stack[n];
        const Eigen::Matrix3d removed = (n % 2 == 1) ? Eigen::Matrix3d(0.5 * (a + a.transpose()))
                                                     : Eigen::Matrix3d(0.5 * (a - a.transpose()));
        worst = std::max(worst, removed.cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace envprobe
