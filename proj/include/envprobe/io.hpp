// io.hpp: JSON and CSV formats. Malformed input throws DataError.

#pragma once

#include <filesystem>
#include <string>

#include "envprobe/derivatives.hpp"
#include "envprobe/dynamics.hpp"
#include "envprobe/model.hpp"
#include "envprobe/pipeline.hpp"
#include "envprobe/reconstruction.hpp"
#include "envprobe/sun_algebra.hpp"

namespace envprobe::io {

namespace fs = std::filesystem;

// {"n": N, "alpha": [3], "beta": [N²−1], "gamma": [[N²−1] × 3]}; unknown keys are rejected.
HamiltonianParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const HamiltonianParams& params);
HamiltonianParams read_params(const fs::path& path);
void write_params(const fs::path& path, const HamiltonianParams& params);

// Header t,a1_k1,a2_k1,a3_k1,a1_k2,...,a3_k3; one row per sample, %.17g, LF.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text, int n);
void write_trajectory(const fs::path& path, const Trajectory& traj);
Trajectory read_trajectory(const fs::path& path, int n);

// {"order", "projected", "matrices": [[9 row-major entries] per order]}
std::string derivatives_to_json_text(const DerivativeStack& stack);
DerivativeStack derivatives_from_json_text(const std::string& text);

std::string report_to_json_text(const ReconstructionReport& report);

// Generators (re/im parts) and the nonzero canonical f and d entries, 1-based.
std::string algebra_to_json_text(const SuNAlgebra& algebra);
SuNAlgebra algebra_from_json_text(const std::string& text);

// t followed by |a − a_e| for the nine functions, forward samples.
std::string residuals_to_csv(const VerifyResult& result);

std::string read_text(const fs::path& path);
// Creates parent directories; overwrites.
void write_text(const fs::path& path, const std::string& text);

} // namespace envprobe::io
