// reconstruction.cpp: closed-form extraction, canonical gauge and multi-order fit

#include "envprobe/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <ceres/ceres.h>

#include "envprobe/commutator.hpp"
#include "envprobe/errors.hpp"

namespace envprobe {

Eigen::Vector3d extract_alpha(const Eigen::Matrix3d& adot) {
    const double defect = (0.5 * (adot + adot.transpose())).cwiseAbs().maxCoeff();
    if (defect > 1e-6) {
        throw DataError("first-order derivative matrix is not antisymmetric (defect " + std::to_string(defect) + ")");
    }
    return {0.5 * (adot(2, 1) - adot(1, 2)), 0.5 * (adot(0, 2) - adot(2, 0)), 0.5 * (adot(1, 0) - adot(0, 1))};
}

GammaGram extract_gamma_gram(const Eigen::Matrix3d& addot, const Eigen::Vector3d& alpha, int n) {
    if (n < 2) throw ConfigError("n must be >= 2");
    const double defect = (0.5 * (addot - addot.transpose())).cwiseAbs().maxCoeff();
    if (defect > 1e-6) {
        throw DataError("second-order derivative matrix is not symmetric (defect " + std::to_string(defect) + ")");
    }
    const double c = 2.0 / n;
    const Eigen::Matrix3d a = 0.5 * (addot + addot.transpose());

    Eigen::Matrix3d g = (a - alpha * alpha.transpose()) / c;
    // S_i = c (tr G − G_ii)
    Eigen::Vector3d s;
    for (int i = 0; i < 3; ++i) s(i) = -a(i, i) - (alpha.squaredNorm() - alpha(i) * alpha(i));
    const double total = s.sum();
    for (int i = 0; i < 3; ++i) g(i, i) = (total - 2.0 * s(i)) / (2.0 * c);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(g);
    const double floor = -1e-6 * std::max(1.0, g.cwiseAbs().maxCoeff());
    const double smallest = eig.eigenvalues().minCoeff();
    if (smallest < floor) {
        throw DataError("non-physical derivatives: coupling Gram matrix has eigenvalue " + std::to_string(smallest));
    }
    GammaGram out;
    if (smallest < 0.0) {
        const Eigen::Vector3d clipped = eig.eigenvalues().cwiseMax(0.0);
        out.g = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    } else {
        out.g = g;
    }
    return out;
}

PivotedFactor pivoted_cholesky(const GammaGram& gram) {
    const Eigen::Matrix3d& g = gram.g;
    const double scale = std::max(1.0, g.diagonal().cwiseAbs().maxCoeff());
    PivotedFactor out;
    std::array<bool, 3> used{false, false, false};
    std::array<int, 3> order{};
    int filled = 0;
    for (int k = 0; k < 3; ++k) {
        int p = -1;
        double best = 0.0;
        for (int r = 0; r < 3; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            const double d = g(r, r) - out.l.row(r).head(k).squaredNorm();
            if (p < 0 || d > best + 1e-12 * scale) {
                p = r;
                best = d;
            }
        }
        used[static_cast<std::size_t>(p)] = true;
        order[static_cast<std::size_t>(filled++)] = p;
        if (best <= 1e-13 * scale) continue;  // remaining rows stay zero in this column
        const double piv = std::sqrt(best);
        out.l(p, k) = piv;
        for (int r = 0; r < 3; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            out.l(r, k) = (g(r, p) - out.l.row(r).head(k).dot(out.l.row(p).head(k))) / piv;
        }
        ++out.rank;
    }
    out.pivots = order;
    return out;
}

GammaMatrix canonicalize_gamma(const GammaGram& gram, int n) {
    if (n < 2) throw ConfigError("n must be >= 2");
    GammaMatrix gamma = GammaMatrix::Zero(3, n * n - 1);
    gamma.leftCols(3) = pivoted_cholesky(gram).l;
    return gamma;
}

BetaEstimate extract_beta(const Eigen::Matrix3d& trdot, const Eigen::Vector3d& alpha, const GammaMatrix& gamma,
                          const SuNAlgebra& algebra) {
    const int n = algebra.n();
    const int m = algebra.dim();
    if (gamma.cols() != m) throw std::invalid_argument("extract_beta: gamma has the wrong number of columns");

    HamiltonianParams known = HamiltonianParams::zeros(n);
    known.alpha = alpha;
    known.gamma = gamma;
    const Eigen::Matrix3d rest = trdot - tridot_closed_form(known, algebra.f, algebra.d);

    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    const double c = 2.0 / n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, m);
    Eigen::Vector3d b;
    for (int r = 0; r < 3; ++r) {
        const auto [j, k] = pairs[static_cast<std::size_t>(r)];
        b(r) = 0.5 * (rest(j, k) - rest(k, j));
        for (const auto& e : algebra.f.expanded()) a(r, e.i) += c * e.value * gamma(j, e.j) * gamma(k, e.k);
    }

    std::vector<int> active;
    for (int p = 0; p < m; ++p)
        if (a.col(p).cwiseAbs().maxCoeff() > 0.0) active.push_back(p);

    BetaEstimate out;
    out.beta = Eigen::VectorXd::Zero(m);
    out.unidentified = Eigen::MatrixXd::Identity(m, m);
    if (active.empty()) return out;

    Eigen::MatrixXd reduced(3, static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) reduced.col(static_cast<Eigen::Index>(i)) = a.col(active[i]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(reduced, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = 1e-8 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(reduced.cols());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= tol) continue;
        ++out.identifiable_rank;
        x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / sv(i));
    }
    for (std::size_t i = 0; i < active.size(); ++i) out.beta(active[i]) = x(static_cast<Eigen::Index>(i));

    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, out.identifiable_rank);
    for (int i = 0; i < out.identifiable_rank; ++i)
        for (std::size_t q = 0; q < active.size(); ++q) rows(active[q], i) = svd.matrixV()(static_cast<Eigen::Index>(q), i);
    const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(m, m) - rows * rows.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> csvd(complement, Eigen::ComputeFullU);
    out.unidentified = csvd.matrixU().leftCols(m - out.identifiable_rank);
    return out;
}

HamiltonianParams ReconstructionReport::closed_form_estimate() const {
    HamiltonianParams p = HamiltonianParams::zeros(n);
    p.alpha = alpha_est;
    p.beta = beta_est;
    p.gamma = gamma_canonical;
    return p;
}

HamiltonianParams ReconstructionReport::estimate() const {
    return fit ? fit->params : closed_form_estimate();
}

namespace {

std::vector<double> order_residuals(const DerivativeStack& stack, const HamiltonianParams& params,
                                    const SuNBasis& basis) {
    const auto predicted = nested_derivative_matrices(params, basis, stack.order);
    std::vector<double> out;
    for (int k = 1; k <= stack.order; ++k) out.push_back((stack[k] - predicted[static_cast<std::size_t>(k - 1)]).norm());
    return out;
}

} // namespace

ReconstructionReport reconstruct(const DerivativeStack& stack, const SuNAlgebra& algebra) {
    if (stack.order < 3) throw ConfigError("reconstruction needs derivative orders up to at least 3");
    if (!stack.projected) throw std::invalid_argument("reconstruct: derivative stack must be symmetry-projected");

    ReconstructionReport report;
    report.n = algebra.n();
    report.alpha_est = extract_alpha(stack[1]);
    report.gram_est = extract_gamma_gram(stack[2], report.alpha_est, report.n);
    report.gamma_canonical = canonicalize_gamma(report.gram_est, report.n);
    const BetaEstimate beta = extract_beta(stack[3], report.alpha_est, report.gamma_canonical, algebra);
    report.beta_est = beta.beta;
    report.beta_identifiable_rank = beta.identifiable_rank;
    report.underdetermined = beta.identifiable_rank < algebra.dim();
    report.orders_used = 3;
    report.residuals = order_residuals(stack, report.closed_form_estimate(), algebra.basis);
    return report;
}

namespace {

// Position of each free γ entry: (row, column) for the canonical pattern.
std::vector<std::array<int, 2>> gamma_pattern(const std::array<int, 3>& pivots) {
    std::vector<std::array<int, 2>> out;
    for (int k = 0; k < 3; ++k)
        for (int col = 0; col <= k; ++col) out.push_back({pivots[static_cast<std::size_t>(k)], col});
    return out;
}

struct FitModel {
    const DerivativeStack* stack;
    const SuNBasis* basis;
    int n;
    int max_order;
    std::vector<std::array<int, 2>> pattern;

    HamiltonianParams unpack(const double* alpha, const double* beta, const double* gamma) const {
        HamiltonianParams p = HamiltonianParams::zeros(n);
        p.alpha = Eigen::Vector3d(alpha[0], alpha[1], alpha[2]);
        for (int i = 0; i < p.dim(); ++i) p.beta(i) = beta[i];
        for (std::size_t i = 0; i < pattern.size(); ++i) p.gamma(pattern[i][0], pattern[i][1]) = gamma[i];
        return p;
    }

    bool operator()(double const* const* parameters, double* residuals) const {
        const HamiltonianParams p = unpack(parameters[0], parameters[1], parameters[2]);
        std::vector<Eigen::Matrix3d> predicted;
        try {
            predicted = nested_derivative_matrices(p, *basis, max_order);
        } catch (const NumericalError&) {
            return false;
        }
        for (int k = 0; k < max_order; ++k) {
            const Eigen::Matrix3d diff = predicted[static_cast<std::size_t>(k)] - (*stack)[k + 1];
            for (int e = 0; e < 9; ++e) residuals[9 * k + e] = diff(e % 3, e / 3);
        }
        return true;
    }
};

class HistoryCallback : public ceres::IterationCallback {
public:
    explicit HistoryCallback(std::vector<double>& history) : history_(history) {}
    ceres::CallbackReturnType operator()(const ceres::IterationSummary& summary) override {
        if (summary.iteration == 0 || summary.step_is_successful) history_.push_back(2.0 * summary.cost);
        return ceres::SOLVER_CONTINUE;
    }

private:
    std::vector<double>& history_;
};

} // namespace

FitResult fit_parameters(const DerivativeStack& stack, const SuNAlgebra& algebra, const HamiltonianParams& init,
                         int max_order) {
    if (max_order < 1) throw ConfigError("max_order must be >= 1");
    if (stack.order < max_order) {
        throw ConfigError("derivative stack has order " + std::to_string(stack.order) + ", fit needs " +
                          std::to_string(max_order));
    }
    init.validate();
    if (init.n != algebra.n()) throw std::invalid_argument("fit_parameters: parameter and algebra dimensions differ");

    const PivotedFactor factor = pivoted_cholesky(gamma_gram(init));
    auto* model = new FitModel{&stack, &algebra.basis, init.n, max_order, gamma_pattern(factor.pivots)};

    std::vector<double> alpha(init.alpha.data(), init.alpha.data() + 3);
    std::vector<double> beta(init.beta.data(), init.beta.data() + init.beta.size());
    // Keep init's own entries when it already sits on the pattern; this preserves a reflected orientation.
    GammaMatrix on_pattern = GammaMatrix::Zero(3, init.dim());
    for (const auto& [r, col] : model->pattern) on_pattern(r, col) = init.gamma(r, col);
    const bool keep_init = (on_pattern - init.gamma).cwiseAbs().maxCoeff() == 0.0;
    std::vector<double> gamma;
    for (const auto& [r, col] : model->pattern) gamma.push_back(keep_init ? init.gamma(r, col) : factor.l(r, col));

    auto* cost = new ceres::DynamicNumericDiffCostFunction<FitModel, ceres::CENTRAL>(model);
    cost->AddParameterBlock(3);
    cost->AddParameterBlock(static_cast<int>(beta.size()));
    cost->AddParameterBlock(static_cast<int>(gamma.size()));
    cost->SetNumResiduals(9 * max_order);

    ceres::Problem problem;
    problem.AddResidualBlock(cost, nullptr, alpha.data(), beta.data(), gamma.data());
    for (int k = 0, idx = 0; k < 3; idx += k + 1, ++k) {
        const int diag = idx + k;
        if (gamma[static_cast<std::size_t>(diag)] < 0.0)
            problem.SetParameterUpperBound(gamma.data(), diag, 0.0);
        else
            problem.SetParameterLowerBound(gamma.data(), diag, 0.0);
    }

    FitResult result;
    HistoryCallback callback(result.objective_history);
    ceres::Solver::Options options;
    options.linear_solver_type = ceres::DENSE_QR;
    options.max_num_iterations = 500;
    options.function_tolerance = 1e-10;
    options.gradient_tolerance = 1e-20;
    options.parameter_tolerance = 1e-16;
    options.use_nonmonotonic_steps = false;
    options.num_threads = 1;
    options.logging_type = ceres::SILENT;
    options.callbacks.push_back(&callback);

    ceres::Solver::Summary summary;
    ceres::Solve(options, &problem, &summary);

    result.params = model->unpack(alpha.data(), beta.data(), gamma.data());
    result.objective = 2.0 * summary.final_cost;
    result.initial_objective = 2.0 * summary.initial_cost;
    result.iterations = static_cast<int>(summary.iterations.size()) - 1;
    result.converged = summary.termination_type == ceres::CONVERGENCE;
    result.message = summary.message;
    return result;
}

void refine_with_fit(ReconstructionReport& report, const DerivativeStack& stack, const SuNAlgebra& algebra,
                     int max_order) {
    report.fit = fit_parameters(stack, algebra, report.closed_form_estimate(), max_order);

    // β = 0 along the unidentified directions can be a stationary point (the Hamiltonian stays in a smaller
    // subalgebra there), so a second start moves those directions off zero. Ties keep the first fit.
    const BetaEstimate beta = extract_beta(stack[3], report.alpha_est, report.gamma_canonical, algebra);
    if (beta.unidentified.cols() > 0) {
        HamiltonianParams seeded = report.closed_form_estimate();
        seeded.beta += 0.1 * beta.unidentified * Eigen::VectorXd::Ones(beta.unidentified.cols());
        FitResult other = fit_parameters(stack, algebra, seeded, max_order);
        if (other.objective < report.fit->objective) report.fit = std::move(other);
    }

    report.orders_used = max_order;
    report.residuals = order_residuals(stack, report.fit->params, algebra.basis);
}

int required_order(int n) {
    if (n < 2) throw ConfigError("n must be >= 2");
    // ceil((4n² − 1) / 4.5) in integers
    const int num = 2 * (4 * n * n - 1);
    return (num + 8) / 9;
}

} // namespace envprobe
