// dynamics.hpp: exact joint evolution, reduction to the qubit, sampled Bloch trajectories

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "envprobe/model.hpp"

namespace envprobe {

// Qubit test states ρ₀ = (1 + Σ_k)/2; the environment always starts in 1/N.
enum class Preparation : int { PlusX = 0, PlusY = 1, PlusZ = 2 };

inline constexpr std::array<Preparation, 3> kPreparations{Preparation::PlusX, Preparation::PlusY,
                                                         Preparation::PlusZ};

// ρ₀^(k) ⊗ 1/N
Eigen::MatrixXcd initial_state(Preparation prep, int n);

// Sampled Bloch functions. values[i](j, k) = a_j^(k)(times[i]), 0-based j and k.
struct Trajectory {
    int n{0};
    double dt{0.0};
    std::vector<double> times;
    std::vector<Eigen::Matrix3d> values;

    std::size_t size() const noexcept { return times.size(); }

    // Index of the sample at t = 0 (within 1e-9·dt), if any.
    std::optional<std::size_t> zero_index() const;
};

struct SimulationOptions {
    double dt{1e-3};
    int steps_forward{500};
    int steps_backward{0};
    double noise_sigma{0.0};
    std::uint64_t seed{0};

    void validate() const;
};

// e^{-iHt} ρ₀ e^{iHt} via the spectral decomposition of h. Any real t.
// Throws NumericalError if h is not Hermitian within 1e-10 (relative to max(1, |h|)).
Eigen::MatrixXcd evolve_joint(const Eigen::MatrixXcd& h, Preparation prep, double t);

Eigen::Matrix2cd partial_trace_env(const Eigen::MatrixXcd& rho, int n);

// a_j = Re Tr[ρ Σ_j]
Eigen::Vector3d bloch_point(const Eigen::Matrix2cd& rho_sys);

// Samples t = -steps_backward·dt .. steps_forward·dt. OpenMP-parallel over time
// points using a precomputed eigenbasis phase kernel.
Trajectory simulate_trajectory(const HamiltonianParams& params, const SuNBasis& basis,
                               const SimulationOptions& options);

// Serial reference: evolve_joint → partial_trace_env → bloch_point at every
// sample. Kept for testing and benchmarking the parallel kernel.
Trajectory simulate_trajectory_reference(const HamiltonianParams& params, const SuNBasis& basis,
                                         const SimulationOptions& options);

} // namespace envprobe
