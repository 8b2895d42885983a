// pipeline.cpp

#include "envprobe/pipeline.hpp"

#include <algorithm>

#include "envprobe/errors.hpp"

namespace envprobe {

TrajectoryReconstruction reconstruct_trajectory(const Trajectory& traj, const SuNAlgebra& algebra,
                                                const EstimationOptions& options) {
    if (traj.n != algebra.n()) throw ConfigError("trajectory and algebra dimensions differ");
    if (options.max_order < 3) throw ConfigError("max_order must be >= 3");
    TrajectoryReconstruction out;
    out.raw = estimate_derivatives(traj, options.max_order, options.halfwidth, options.accuracy);
    out.projected = symmetry_project(out.raw);
    out.report = reconstruct(out.projected, algebra);
    if (options.max_order > 3) refine_with_fit(out.report, out.projected, algebra, options.max_order);
    return out;
}

Eigen::Matrix3d VerifyResult::residual(std::size_t i) const {
    return (truth.values.at(i) - replay.values.at(i)).cwiseAbs();
}

VerifyResult verify_reconstruction(const HamiltonianParams& params, const SuNAlgebra& algebra,
                                   const SimulationOptions& sim, const EstimationOptions& options) {
    params.validate();
    VerifyResult out;
    const Trajectory measured = simulate_trajectory(params, algebra.basis, sim);
    out.reconstruction = reconstruct_trajectory(measured, algebra, options);

    SimulationOptions forward = sim;
    forward.steps_backward = 0;
    forward.noise_sigma = 0.0;
    out.truth = simulate_trajectory(params, algebra.basis, forward);
    out.replay = simulate_trajectory(out.reconstruction.report.estimate(), algebra.basis, forward);
    for (std::size_t i = 0; i < out.truth.size(); ++i) out.max_residual = std::max(out.max_residual, out.residual(i).maxCoeff());
    return out;
}

} // namespace envprobe
