// io.cpp

#include "envprobe/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "envprobe/errors.hpp"

namespace envprobe::io {

using json = nlohmann::ordered_json;

namespace {

const char* const kTrajectoryHeader = "t,a1_k1,a2_k1,a3_k1,a1_k2,a2_k2,a3_k2,a1_k3,a2_k3,a3_k3";

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(what + ": " + e.what());
    }
}

void require_keys(const json& j, const std::set<std::string>& required, const std::set<std::string>& optional,
                  const std::string& what) {
    if (!j.is_object()) throw DataError(what + ": expected a JSON object");
    for (const auto& key : required)
        if (!j.contains(key)) throw DataError(what + ": missing field '" + key + "'");
    for (const auto& [key, value] : j.items())
        if (!required.count(key) && !optional.count(key)) throw DataError(what + ": unknown field '" + key + "'");
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw DataError(what + ": expected a number");
    return j.get<double>();
}

Eigen::VectorXd vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw DataError(what + ": expected an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
    return v;
}

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json rows_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(m.row(r).transpose()));
    return a;
}

json params_json(const HamiltonianParams& p) {
    json j;
    j["n"] = p.n;
    j["alpha"] = to_json(p.alpha);
    j["beta"] = to_json(p.beta);
    j["gamma"] = rows_to_json(p.gamma);
    return j;
}

HamiltonianParams params_from(const json& j) {
    require_keys(j, {"n", "alpha", "beta", "gamma"}, {}, "params");
    if (!j["n"].is_number_integer()) throw DataError("params: 'n' must be an integer");
    HamiltonianParams p;
    p.n = j["n"].get<int>();
    const Eigen::VectorXd alpha = vector(j["alpha"], "params.alpha");
    if (alpha.size() != 3) throw ConfigError("params.alpha must have 3 entries");
    p.alpha = alpha;
    p.beta = vector(j["beta"], "params.beta");
    const json& g = j["gamma"];
    if (!g.is_array() || g.size() != 3) throw ConfigError("params.gamma must have 3 rows");
    p.gamma = GammaMatrix::Zero(3, p.beta.size());
    for (int r = 0; r < 3; ++r) {
        const Eigen::VectorXd row = vector(g[static_cast<std::size_t>(r)], "params.gamma");
        if (row.size() != p.beta.size()) throw ConfigError("params.gamma rows must match the length of beta");
        p.gamma.row(r) = row.transpose();
    }
    p.validate();
    return p;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw DataError("trajectory line " + std::to_string(line) + ": cannot parse '" + s + "'");
    }
    return v;
}

json tensor_json(const std::map<std::array<int, 3>, double>& entries) {
    json a = json::array();
    for (const auto& [key, value] : entries) a.push_back({key[0], key[1], key[2], value});
    return a;
}

std::map<std::array<int, 3>, double> tensor_from(const json& j, const std::string& what) {
    if (!j.is_array()) throw DataError(what + ": expected an array");
    std::map<std::array<int, 3>, double> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 4) throw DataError(what + ": entries are [i, j, k, value]");
        out[{e[0].get<int>(), e[1].get<int>(), e[2].get<int>()}] = number(e[3], what);
    }
    return out;
}

// Type and range errors from the JSON accessors become DataError.
template <typename F>
auto guarded(const std::string& what, F&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw DataError(what + ": " + e.what());
    }
}

} // namespace

HamiltonianParams params_from_json_text(const std::string& text) {
    return guarded("params", [&] { return params_from(parse(text, "params")); });
}

std::string params_to_json_text(const HamiltonianParams& params) {
    return params_json(params).dump(2) + "\n";
}

HamiltonianParams read_params(const fs::path& path) {
    return params_from_json_text(read_text(path));
}

void write_params(const fs::path& path, const HamiltonianParams& params) {
    write_text(path, params_to_json_text(params));
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = std::string(kTrajectoryHeader) + "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += format_double(traj.times[i]);
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) out += "," + format_double(traj.values[i](j, k));
        out += "\n";
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text, int n) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("trajectory: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) throw DataError("trajectory: unexpected header '" + line + "'");

    Trajectory traj;
    traj.n = n;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) {
            throw DataError("trajectory line " + std::to_string(lineno) + ": expected 10 columns, found " +
                            std::to_string(cells.size()));
        }
        traj.times.push_back(parse_double(cells[0], lineno));
        Eigen::Matrix3d m;
        for (int c = 0; c < 9; ++c) m(c % 3, c / 3) = parse_double(cells[static_cast<std::size_t>(c + 1)], lineno);
        traj.values.push_back(m);
    }
    if (traj.size() < 2) throw DataError("trajectory: need at least two samples");
    traj.dt = (traj.times.back() - traj.times.front()) / static_cast<double>(traj.size() - 1);
    return traj;
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
    write_text(path, trajectory_to_csv(traj));
}

Trajectory read_trajectory(const fs::path& path, int n) {
    return trajectory_from_csv(read_text(path), n);
}

std::string derivatives_to_json_text(const DerivativeStack& stack) {
    json j;
    j["order"] = stack.order;
    j["projected"] = stack.projected;
    json mats = json::array();
    for (const auto& m : stack.mats) {
        json flat = json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) flat.push_back(m(r, c));
        mats.push_back(flat);
    }
    j["matrices"] = mats;
    return j.dump(2) + "\n";
}

namespace {

DerivativeStack derivatives_from(const json& j) {
    require_keys(j, {"order", "projected", "matrices"}, {}, "derivatives");
    DerivativeStack stack;
    stack.order = j["order"].get<int>();
    stack.projected = j["projected"].get<bool>();
    const json& mats = j["matrices"];
    if (!mats.is_array() || static_cast<int>(mats.size()) != stack.order) {
        throw DataError("derivatives: expected " + std::to_string(stack.order) + " matrices");
    }
    for (const auto& flat : mats) {
        const Eigen::VectorXd v = vector(flat, "derivatives.matrices");
        if (v.size() != 9) throw DataError("derivatives: each matrix needs 9 entries");
        Eigen::Matrix3d m;
        for (int e = 0; e < 9; ++e) m(e / 3, e % 3) = v(e);
        stack.mats.push_back(m);
    }
    return stack;
}

} // namespace

DerivativeStack derivatives_from_json_text(const std::string& text) {
    return guarded("derivatives", [&] { return derivatives_from(parse(text, "derivatives")); });
}

std::string report_to_json_text(const ReconstructionReport& report) {
    json j;
    j["n"] = report.n;
    j["alpha_est"] = to_json(report.alpha_est);
    j["gram_est"] = rows_to_json(report.gram_est.g);
    j["gamma_canonical"] = rows_to_json(report.gamma_canonical);
    j["beta_est"] = to_json(report.beta_est);
    j["beta_identifiable_rank"] = report.beta_identifiable_rank;
    j["underdetermined"] = report.underdetermined;
    j["orders_used"] = report.orders_used;
    j["residuals"] = report.residuals;
    if (report.fit) {
        const FitResult& fit = *report.fit;
        json f;
        f["params"] = params_json(fit.params);
        f["objective"] = fit.objective;
        f["initial_objective"] = fit.initial_objective;
        f["iterations"] = fit.iterations;
        f["converged"] = fit.converged;
        f["message"] = fit.message;
        f["objective_history"] = fit.objective_history;
        j["fit"] = f;
    } else {
        j["fit"] = nullptr;
    }
    j["estimate"] = params_json(report.estimate());
    return j.dump(2) + "\n";
}

std::string algebra_to_json_text(const SuNAlgebra& algebra) {
    json j;
    j["n"] = algebra.n();
    json gens = json::array();
    for (const auto& g : algebra.basis.generators) {
        json re = json::array(), im = json::array();
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            json rr = json::array(), ir = json::array();
            for (Eigen::Index c = 0; c < g.cols(); ++c) {
                rr.push_back(g(r, c).real());
                ir.push_back(g(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ir);
        }
        gens.push_back({{"re", re}, {"im", im}});
    }
    j["generators"] = gens;
    j["f"] = tensor_json(algebra.f.canonical());
    j["d"] = tensor_json(algebra.d.canonical());
    return j.dump(2) + "\n";
}

namespace {

SuNAlgebra algebra_from(const json& j) {
    require_keys(j, {"n", "generators", "f", "d"}, {}, "algebra");
    SuNAlgebra algebra;
    const int n = j["n"].get<int>();
    algebra.basis.n = n;
    const json& gens = j["generators"];
    if (!gens.is_array() || static_cast<int>(gens.size()) != n * n - 1) {
        throw DataError("algebra: expected " + std::to_string(n * n - 1) + " generators");
    }
    for (const auto& g : gens) {
        require_keys(g, {"re", "im"}, {}, "algebra.generators");
        Eigen::MatrixXcd m(n, n);
        for (int r = 0; r < n; ++r) {
            const Eigen::VectorXd re = vector(g["re"].at(static_cast<std::size_t>(r)), "algebra.generators");
            const Eigen::VectorXd im = vector(g["im"].at(static_cast<std::size_t>(r)), "algebra.generators");
            if (re.size() != n || im.size() != n) throw DataError("algebra: generator rows must have length n");
            for (int c = 0; c < n; ++c) m(r, c) = {re(c), im(c)};
        }
        algebra.basis.generators.push_back(m);
    }
    algebra.f = StructureConstants(n, tensor_from(j["f"], "algebra.f"));
    algebra.d = SymmetricConstants(n, tensor_from(j["d"], "algebra.d"));
    return algebra;
}

} // namespace

SuNAlgebra algebra_from_json_text(const std::string& text) {
    return guarded("algebra", [&] { return algebra_from(parse(text, "algebra")); });
}

std::string residuals_to_csv(const VerifyResult& result) {
    std::string out = "t,r1_k1,r2_k1,r3_k1,r1_k2,r2_k2,r3_k2,r1_k3,r2_k3,r3_k3\n";
    for (std::size_t i = 0; i < result.truth.size(); ++i) {
        const Eigen::Matrix3d r = result.residual(i);
        out += format_double(result.truth.times[i]);
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) out += "," + format_double(r(j, k));
        out += "\n";
    }
    return out;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace envprobe::io
