// envprobe: command-line driver
//
//   envprobe gen-su --n 3 --out DIR
//   envprobe simulate [--params P.json] [--dt --steps --back-steps --noise-sigma --seed] --out DIR
//   envprobe reconstruct --trajectory T.csv (--n N | --params P.json) [--halfwidth --accuracy --max-order] --out DIR
//   envprobe verify [--params P.json] [simulation and estimation flags] --out DIR
//   envprobe verify-identities --n N [--trials --seed --params P.json]
//   envprobe report --report DIR/report.json
//
// Every command also takes --config RUN.json; explicit flags win over the file,
// the file wins over defaults. Exit codes: 0 ok, 2 configuration, 3 data,
// 4 numerical check failed, 1 anything else.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "envprobe/commutator.hpp"
#include "envprobe/errors.hpp"
#include "envprobe/io.hpp"
#include "envprobe/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace envprobe;

namespace {

constexpr double kIdentityTolerance = 1e-8;

struct RunConfig {
    std::string params_path;
    double dt{1e-3};
    int steps_forward{500};
    int steps_backward{3};
    int halfwidth{3};
    int accuracy{2};
    int max_order{5};
    double noise_sigma{0.0};
    std::uint64_t seed{0};
    std::string output_dir{"."};

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
        if (steps_forward < 1) throw ConfigError("steps must be >= 1");
        if (steps_backward < 0) throw ConfigError("back-steps must be >= 0");
        if (!params_path.empty() && !fs::exists(params_path)) throw ConfigError("params file not found: " + params_path);
    }

    SimulationOptions simulation() const {
        SimulationOptions s;
        s.dt = dt;
        s.steps_forward = steps_forward;
        s.steps_backward = steps_backward;
        s.noise_sigma = noise_sigma;
        s.seed = seed;
        return s;
    }

    EstimationOptions estimation() const { return {halfwidth, accuracy, max_order}; }

    HamiltonianParams params() const { return params_path.empty() ? demo_qutrit_params() : io::read_params(params_path); }
};

void load_config_file(RunConfig& cfg, const std::string& path) {
    json j;
    try {
        j = json::parse(io::read_text(path));
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": expected a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "params_path") cfg.params_path = value.get<std::string>();
            else if (key == "dt") cfg.dt = value.get<double>();
            else if (key == "steps_forward") cfg.steps_forward = value.get<int>();
            else if (key == "steps_backward") cfg.steps_backward = value.get<int>();
            else if (key == "stencil_halfwidth") cfg.halfwidth = value.get<int>();
            else if (key == "stencil_accuracy") cfg.accuracy = value.get<int>();
            else if (key == "max_order") cfg.max_order = value.get<int>();
            else if (key == "noise_sigma") cfg.noise_sigma = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
            else throw ConfigError("config " + path + ": unknown field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

// Options parsed into a scratch config; copied over the file values only when given.
struct Flags {
    RunConfig values;
    std::string config_path;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

    template <typename T>
    void add(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
        CLI::Option* opt = app->add_option(name, values.*field, help);
        setters.emplace_back(opt, [this, field](RunConfig& cfg) { cfg.*field = values.*field; });
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const auto& [opt, set] : setters)
            if (opt->count() > 0) set(cfg);
        cfg.validate();
        return cfg;
    }
};

void add_simulation_flags(CLI::App* app, Flags& f) {
    f.add(app, "--params", &RunConfig::params_path, "Hamiltonian parameters (JSON); default: built-in N=3 model");
    f.add(app, "--dt", &RunConfig::dt, "Sampling step");
    f.add(app, "--steps", &RunConfig::steps_forward, "Samples after t = 0");
    f.add(app, "--back-steps", &RunConfig::steps_backward, "Samples before t = 0");
    f.add(app, "--noise-sigma", &RunConfig::noise_sigma, "Gaussian noise added to every sample");
    f.add(app, "--seed", &RunConfig::seed, "Noise seed");
}

void add_estimation_flags(CLI::App* app, Flags& f) {
    f.add(app, "--halfwidth", &RunConfig::halfwidth, "Largest stencil halfwidth around t = 0");
    f.add(app, "--accuracy", &RunConfig::accuracy, "Stencil accuracy order (even)");
    f.add(app, "--max-order", &RunConfig::max_order, "Highest derivative order; > 3 enables the fit");
}

void add_common_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config_path, "Run configuration (JSON)");
    f.add(app, "--out", &RunConfig::output_dir, "Output directory");
}

void print_written(const fs::path& p) {
    std::cout << "wrote " << p.string() << "\n";
}

json vec(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

int cmd_gen_su(int n, const RunConfig& cfg) {
    const SuNAlgebra algebra = make_algebra(n);
    const fs::path out = fs::path(cfg.output_dir) / ("su" + std::to_string(n) + ".json");
    io::write_text(out, io::algebra_to_json_text(algebra));
    const SuNAlgebra reloaded = io::algebra_from_json_text(io::read_text(out));
    const double closure = closure_residual(reloaded.basis, reloaded.f);
    print_written(out);
    std::cout << "generators " << algebra.dim() << ", nonzero f entries " << algebra.f.canonical().size()
              << ", closure residual after reload " << closure << "\n";
    if (closure > 1e-10) throw NumericalError("closure check failed after reload");
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const HamiltonianParams params = cfg.params();
    const SuNBasis basis = build_generators(params.n);
    const Trajectory traj = simulate_trajectory(params, basis, cfg.simulation());
    const fs::path out = fs::path(cfg.output_dir) / "trajectory.csv";
    io::write_trajectory(out, traj);
    print_written(out);
    return 0;
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& trajectory_path, std::optional<int> n_flag) {
    int n = 0;
    if (n_flag) n = *n_flag;
    else if (!cfg.params_path.empty()) n = io::read_params(cfg.params_path).n;
    else throw ConfigError("reconstruct needs --n or --params to know the environment dimension");

    const SuNAlgebra algebra = make_algebra(n);
    const Trajectory traj = io::read_trajectory(trajectory_path, n);
    const TrajectoryReconstruction r = reconstruct_trajectory(traj, algebra, cfg.estimation());

    const fs::path dir(cfg.output_dir);
    io::write_text(dir / "derivatives.json", io::derivatives_to_json_text(r.projected));
    io::write_text(dir / "report.json", io::report_to_json_text(r.report));
    print_written(dir / "derivatives.json");
    print_written(dir / "report.json");
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const HamiltonianParams params = cfg.params();
    const SuNAlgebra algebra = make_algebra(params.n);
    const VerifyResult result = verify_reconstruction(params, algebra, cfg.simulation(), cfg.estimation());
    const ReconstructionReport& report = result.reconstruction.report;

    json summary;
    summary["n"] = params.n;
    summary["dt"] = cfg.dt;
    summary["steps"] = cfg.steps_forward;
    summary["noise_sigma"] = cfg.noise_sigma;
    summary["max_order"] = cfg.max_order;
    summary["max_residual"] = result.max_residual;
    summary["max_residual_fraction_of_range"] = result.max_residual / 2.0;
    summary["alpha_est"] = vec(report.alpha_est);
    summary["beta_identifiable_rank"] = report.beta_identifiable_rank;
    summary["fit_converged"] = report.fit ? json(report.fit->converged) : json(nullptr);

    const fs::path dir(cfg.output_dir);
    io::write_text(dir / "residual.csv", io::residuals_to_csv(result));
    io::write_text(dir / "summary.json", summary.dump(2) + "\n");
    io::write_text(dir / "report.json", io::report_to_json_text(report));
    for (const char* name : {"residual.csv", "summary.json", "report.json"}) print_written(dir / name);
    std::printf("max residual %.3e (%.4f%% of range)\n", result.max_residual, 50.0 * result.max_residual);
    return 0;
}

// Random parameters with N(0,1) entries.
HamiltonianParams random_params(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    HamiltonianParams p = HamiltonianParams::zeros(n);
    for (int i = 0; i < 3; ++i) p.alpha(i) = normal(rng);
    for (int i = 0; i < p.dim(); ++i) p.beta(i) = normal(rng);
    for (int c = 0; c < p.dim(); ++c)
        for (int r = 0; r < 3; ++r) p.gamma(r, c) = normal(rng);
    return p;
}

int cmd_verify_identities(int n, int trials, const RunConfig& cfg) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    std::optional<HamiltonianParams> fixed;
    if (!cfg.params_path.empty()) {
        fixed = io::read_params(cfg.params_path);
        n = fixed->n;
    }
    const SuNAlgebra algebra = make_algebra(n);
    std::mt19937_64 rng(cfg.seed);

    const double replacement = verify_replacement_rules(algebra, trials, cfg.seed);
    double worst_double = 0.0, worst_triple = 0.0;
    std::array<double, 6> worst_pieces{};
    for (int t = 0; t < trials; ++t) {
        const HamiltonianParams p = fixed ? *fixed : random_params(n, rng);
        worst_double = std::max(worst_double, verify_double_commutator(p, algebra));
        const TripleCommutatorCheck tc = verify_triple_commutator(p, algebra);
        worst_triple = std::max(worst_triple, tc.total);
        for (std::size_t i = 0; i < 6; ++i) worst_pieces[i] = std::max(worst_pieces[i], tc.pieces[i]);
    }

    json summary;
    summary["n"] = n;
    summary["trials"] = trials;
    summary["seed"] = cfg.seed;
    summary["replacement_rules"] = replacement;
    summary["double_commutator"] = worst_double;
    summary["triple_commutator"] = worst_triple;
    summary["triple_pieces"] = worst_pieces;
    const double worst = std::max({replacement, worst_double, worst_triple,
                                   *std::max_element(worst_pieces.begin(), worst_pieces.end())});
    summary["tolerance"] = kIdentityTolerance;
    summary["pass"] = worst <= kIdentityTolerance;
    std::cout << summary.dump(2) << "\n";
    if (worst > kIdentityTolerance) throw NumericalError("identity residual " + std::to_string(worst) + " exceeds 1e-8");
    return 0;
}

int cmd_report(const std::string& report_path) {
    json j;
    try {
        j = json::parse(io::read_text(report_path));
    } catch (const json::exception& e) {
        throw DataError(report_path + ": " + e.what());
    }
    auto show = [](const json& v) { return v.dump(); };
    try {
        std::cout << "N                       " << j.at("n").get<int>() << "\n";
        std::cout << "alpha                   " << show(j.at("alpha_est")) << "\n";
        std::cout << "gram(gamma)             " << show(j.at("gram_est")) << "\n";
        std::cout << "gamma (canonical)       " << show(j.at("gamma_canonical")) << "\n";
        std::cout << "beta                    " << show(j.at("beta_est")) << "\n";
        std::cout << "beta identifiable rank  " << j.at("beta_identifiable_rank").get<int>()
                  << (j.at("underdetermined").get<bool>() ? " (underdetermined)" : "") << "\n";
        std::cout << "orders used             " << j.at("orders_used").get<int>() << "\n";
        std::cout << "residual per order      " << show(j.at("residuals")) << "\n";
        const json& fit = j.at("fit");
        if (!fit.is_null()) {
            std::cout << "fit objective           " << fit.at("initial_objective").get<double>() << " -> "
                      << fit.at("objective").get<double>() << " in " << fit.at("iterations").get<int>()
                      << " iterations" << (fit.at("converged").get<bool>() ? "" : " (not converged)") << "\n";
            const json& p = fit.at("params");
            std::cout << "fit alpha               " << show(p.at("alpha")) << "\n";
            std::cout << "fit beta                " << show(p.at("beta")) << "\n";
            std::cout << "fit gamma               " << show(p.at("gamma")) << "\n";
        }
    } catch (const json::exception& e) {
        throw DataError(report_path + ": " + e.what());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit-environment Hamiltonian reconstruction from qubit dynamics"};
    app.require_subcommand(1);

    Flags gen_flags, sim_flags, rec_flags, ver_flags, id_flags, rep_flags;
    int n = 3;
    int trials = 100;
    std::optional<int> rec_n;
    std::string trajectory_path;
    std::string report_path;

    auto* gen = app.add_subcommand("gen-su", "Write SU(N) generators and structure constants");
    gen->add_option("--n", n, "Environment dimension")->required();
    add_common_flags(gen, gen_flags);

    auto* sim = app.add_subcommand("simulate", "Simulate the nine Bloch functions");
    add_simulation_flags(sim, sim_flags);
    add_common_flags(sim, sim_flags);

    auto* rec = app.add_subcommand("reconstruct", "Reconstruct parameters from a trajectory CSV");
    rec->add_option("--trajectory", trajectory_path, "Trajectory CSV")->required();
    rec->add_option("--n", rec_n, "Environment dimension");
    rec_flags.add(rec, "--params", &RunConfig::params_path, "Parameters file (only N is used)");
    add_estimation_flags(rec, rec_flags);
    add_common_flags(rec, rec_flags);

    auto* ver = app.add_subcommand("verify", "Simulate, reconstruct, re-simulate and compare");
    add_simulation_flags(ver, ver_flags);
    add_estimation_flags(ver, ver_flags);
    add_common_flags(ver, ver_flags);

    auto* ids = app.add_subcommand("verify-identities", "Check the commutator identities on random draws");
    ids->add_option("--n", n, "Environment dimension");
    ids->add_option("--trials", trials, "Random draws");
    id_flags.add(ids, "--seed", &RunConfig::seed, "Random seed");
    id_flags.add(ids, "--params", &RunConfig::params_path, "Check these parameters instead of random ones");
    ids->add_option("--config", id_flags.config_path, "Run configuration (JSON)");

    auto* rep = app.add_subcommand("report", "Print a reconstruction report");
    rep->add_option("--report", report_path, "report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_su(n, gen_flags.resolve());
        if (sim->parsed()) return cmd_simulate(sim_flags.resolve());
        if (rec->parsed()) return cmd_reconstruct(rec_flags.resolve(), trajectory_path, rec_n);
        if (ver->parsed()) return cmd_verify(ver_flags.resolve());
        if (ids->parsed()) return cmd_verify_identities(n, trials, id_flags.resolve());
        if (rep->parsed()) return cmd_report(report_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
