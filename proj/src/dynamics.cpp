// dynamics.cpp: spectral propagation and trajectory sampling

#include "envprobe/dynamics.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include <omp.h>

#include "envprobe/errors.hpp"

namespace envprobe {

namespace {

using cd = std::complex<double>;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> checked_eigensolver(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("Hamiltonian must be square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * scale) {
        throw NumericalError("Hamiltonian is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("Hamiltonian eigendecomposition failed");
    return solver;
}

std::vector<double> sample_times(const SimulationOptions& options) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(options.steps_backward + options.steps_forward + 1));
    for (int s = -options.steps_backward; s <= options.steps_forward; ++s) times.push_back(s * options.dt);
    return times;
}

// Noise is drawn serially in CSV column order so both implementations agree bit for bit.
void add_noise(Trajectory& traj, const SimulationOptions& options) {
    if (options.noise_sigma <= 0.0) return;
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, options.noise_sigma);
    for (auto& m : traj.values)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) m(j, k) += normal(rng);
}

Trajectory empty_trajectory(const HamiltonianParams& params, const SimulationOptions& options) {
    Trajectory traj;
    traj.n = params.n;
    traj.dt = options.dt;
    traj.times = sample_times(options);
    traj.values.assign(traj.times.size(), Eigen::Matrix3d::Zero());
    return traj;
}

} // namespace

Eigen::MatrixXcd initial_state(Preparation prep, int n) {
    const Eigen::Matrix2cd qubit = 0.5 * (Eigen::Matrix2cd::Identity() + pauli()[static_cast<int>(prep)]);
    return kron(qubit, Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n));
}

std::optional<std::size_t> Trajectory::zero_index() const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i]) <= 1e-9 * std::abs(dt)) return i;
    return std::nullopt;
}

void SimulationOptions::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be a positive finite number");
    if (steps_forward < 1) throw ConfigError("steps_forward must be >= 1");
    if (steps_backward < 0) throw ConfigError("steps_backward must be >= 0");
    if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
}

Eigen::MatrixXcd evolve_joint(const Eigen::MatrixXcd& h, Preparation prep, double t) {
    const auto solver = checked_eigensolver(h);
    const int n = static_cast<int>(h.rows() / 2);
    const Eigen::MatrixXcd rho0 = initial_state(prep, n);
    if (t == 0.0) return rho0;

    const Eigen::VectorXcd phases =
        (solver.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp().matrix();
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
    return u * rho0 * u.adjoint();
}

Eigen::Matrix2cd partial_trace_env(const Eigen::MatrixXcd& rho, int n) {
    if (rho.rows() != 2 * n || rho.cols() != 2 * n) {
        throw std::invalid_argument("partial_trace_env: expected a " + std::to_string(2 * n) + "x" +
                                    std::to_string(2 * n) + " matrix");
    }
    Eigen::Matrix2cd out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out(a, b) = rho.block(a * n, b * n, n, n).trace();
    return out;
}

Eigen::Vector3d bloch_point(const Eigen::Matrix2cd& rho_sys) {
    Eigen::Vector3d a;
    for (int j = 0; j < 3; ++j) a(j) = (rho_sys * pauli()[j]).trace().real();
    return a;
}

Trajectory simulate_trajectory(const HamiltonianParams& params, const SuNBasis& basis,
                               const SimulationOptions& options) {
    options.validate();
    const Eigen::MatrixXcd h = assemble_hamiltonian(params, basis);
    const auto solver = checked_eigensolver(h);
    const Eigen::VectorXd w = solver.eigenvalues();
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const int n = params.n;

    // weights[3k + j](a, b) = ρ̃^(k)_ab · Σ̃_j,ba in the eigenbasis of H, so that
    // a_j^(k)(t) = Re Σ_ab weights_ab e^{-i(w_a - w_b)t}.
    std::array<Eigen::MatrixXcd, 9> weights;
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXcd rho = v.adjoint() * initial_state(kPreparations[k], n) * v;
        for (int j = 0; j < 3; ++j) {
            const Eigen::MatrixXcd sigma = v.adjoint() * system_operator(j, n) * v;
            weights[3 * k + j] = rho.cwiseProduct(sigma.transpose());
        }
    }

    Trajectory traj = empty_trajectory(params, options);
    const auto count = static_cast<std::ptrdiff_t>(traj.times.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const double t = traj.times[static_cast<std::size_t>(i)];
        const Eigen::VectorXcd p = (w.cast<cd>() * cd(0.0, -t)).array().exp().matrix();
        Eigen::Matrix3d& out = traj.values[static_cast<std::size_t>(i)];
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                out(j, k) = (p.transpose() * weights[3 * k + j] * p.conjugate()).value().real();
    }

    add_noise(traj, options);
    return traj;
}

Trajectory simulate_trajectory_reference(const HamiltonianParams& params, const SuNBasis& basis,
                                         const SimulationOptions& options) {
    options.validate();
    const Eigen::MatrixXcd h = assemble_hamiltonian(params, basis);
    Trajectory traj = empty_trajectory(params, options);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const Eigen::MatrixXcd rho = evolve_joint(h, kPreparations[k], traj.times[i]);
            traj.values[i].col(k) = bloch_point(partial_trace_env(rho, params.n));
        }
    }
    add_noise(traj, options);
    return traj;
}

} // namespace envprobe
