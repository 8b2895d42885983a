// pipeline.hpp: simulate → differentiate → reconstruct → re-simulate

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "envprobe/derivatives.hpp"
#include "envprobe/dynamics.hpp"
#include "envprobe/reconstruction.hpp"

namespace envprobe {

struct EstimationOptions {
    int halfwidth{3};
    int accuracy{2};
    int max_order{5};  // > 3 runs the multi-order fit
};

struct TrajectoryReconstruction {
    DerivativeStack raw;
    DerivativeStack projected;
    ReconstructionReport report;
};

// estimate_derivatives (orders up to max(3, max_order)) → symmetry_project →
// reconstruct, then the fit when max_order > 3.
TrajectoryReconstruction reconstruct_trajectory(const Trajectory& traj, const SuNAlgebra& algebra,
                                                const EstimationOptions& options);

struct VerifyResult {
    Trajectory truth;    // noiseless, forward samples only
    Trajectory replay;   // re-simulated from the estimate on the same grid
    TrajectoryReconstruction reconstruction;
    double max_residual{0.0};

    // |truth − replay| at sample i
    Eigen::Matrix3d residual(std::size_t i) const;
};

// Simulates `params` (noise and backward samples per `sim`), reconstructs, and
// compares the re-simulated estimate with the noiseless truth for t >= 0.
VerifyResult verify_reconstruction(const HamiltonianParams& params, const SuNAlgebra& algebra,
                                   const SimulationOptions& sim, const EstimationOptions& options);

} // namespace envprobe
