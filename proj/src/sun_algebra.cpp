// sun_algebra.cpp: generator construction and invariant tensors

#include "envprobe/sun_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "envprobe/errors.hpp"

namespace envprobe {

namespace {

constexpr double kZeroTol = 1e-12;

int permutation_sign(std::array<int, 3>& idx) {
    int sign = 1;
    // three-element bubble sort, counting swaps
    for (int pass = 0; pass < 2; ++pass) {
        for (int p = 0; p < 2; ++p) {
            if (idx[p] > idx[p + 1]) {
                std::swap(idx[p], idx[p + 1]);
                sign = -sign;
            }
        }
    }
    return sign;
}

std::vector<TensorEntry> expand(const std::map<std::array<int, 3>, double>& canonical, bool antisymmetric) {
    static constexpr std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
    static constexpr std::array<int, 6> signs{1, 1, 1, -1, -1, -1};

    std::vector<TensorEntry> out;
    for (const auto& [key, value] : canonical) {
        std::map<std::array<int, 3>, double> seen; // repeated indices collapse permutations
        for (std::size_t p = 0; p < perms.size(); ++p) {
            std::array<int, 3> idx{key[perms[p][0]] - 1, key[perms[p][1]] - 1, key[perms[p][2]] - 1};
            seen[idx] = antisymmetric ? signs[p] * value : value;
        }
        for (const auto& [idx, v] : seen) out.push_back({idx[0], idx[1], idx[2], v});
    }
    return out;
}

std::complex<double> trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    // Tr(AB) without forming AB
    return (a.transpose().array() * b.array()).sum();
}

} // namespace

StructureConstants::StructureConstants(int n, std::map<std::array<int, 3>, double> canonical)
    : n_(n), canonical_(std::move(canonical)), expanded_(expand(canonical_, true)) {}

double StructureConstants::operator()(int i, int j, int k) const {
    std::array<int, 3> idx{i, j, k};
    if (i == j || j == k || i == k) return 0.0;
    const int sign = permutation_sign(idx);
    const auto it = canonical_.find(idx);
    return it == canonical_.end() ? 0.0 : sign * it->second;
}

SymmetricConstants::SymmetricConstants(int n, std::map<std::array<int, 3>, double> canonical)
    : n_(n), canonical_(std::move(canonical)), expanded_(expand(canonical_, false)) {}

double SymmetricConstants::operator()(int i, int j, int k) const {
    std::array<int, 3> idx{i, j, k};
    permutation_sign(idx);
    const auto it = canonical_.find(idx);
    return it == canonical_.end() ? 0.0 : it->second;
}

SuNBasis build_generators(int n) {
    if (n < 2) {
        throw ConfigError("build_generators: dimension must be >= 2, got " + std::to_string(n));
    }
    using cd = std::complex<double>;
    SuNBasis basis;
    basis.n = n;
    basis.generators.reserve(static_cast<std::size_t>(n * n - 1));

    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(n, n);
            sym(i, j) = sym(j, i) = 1.0;
            Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(n, n);
            anti(i, j) = cd(0.0, -1.0);
            anti(j, i) = cd(0.0, 1.0);
            basis.generators.push_back(std::move(sym));
            basis.generators.push_back(std::move(anti));
        }
        // diagonal generator for block size m = j+1
        const int m = j + 1;
        Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
        for (int p = 0; p < m - 1; ++p) diag(p, p) = 1.0;
        diag(m - 1, m - 1) = -static_cast<double>(m - 1);
        diag *= std::sqrt(2.0 / (m * m - m));
        basis.generators.push_back(std::move(diag));
    }
    return basis;
}

StructureConstants compute_structure_constants(const SuNBasis& basis) {
    const int dim = basis.dim();
    const auto& g = basis.generators;
    std::map<std::array<int, 3>, double> canonical;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Eigen::MatrixXcd comm = g[i] * g[j] - g[j] * g[i];
            for (int k = j + 1; k < dim; ++k) {
                const std::complex<double> tr = trace_product(comm, g[k]);
                const double value = (tr / std::complex<double>(0.0, 4.0)).real();
                if (std::abs(value) > kZeroTol) canonical[{i + 1, j + 1, k + 1}] = value;
            }
        }
    }
    return StructureConstants(basis.n, std::move(canonical));
}

SymmetricConstants compute_symmetric_constants(const SuNBasis& basis) {
    const int dim = basis.dim();
    const auto& g = basis.generators;
    std::map<std::array<int, 3>, double> canonical;
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const Eigen::MatrixXcd anti = g[i] * g[j] + g[j] * g[i];
            for (int k = j; k < dim; ++k) {
                const double value = trace_product(anti, g[k]).real() / 4.0;
                if (std::abs(value) > kZeroTol) canonical[{i + 1, j + 1, k + 1}] = value;
            }
        }
    }
    return SymmetricConstants(basis.n, std::move(canonical));
}

double closure_residual(const SuNBasis& basis, const StructureConstants& f) {
    if (basis.n != f.n()) {
        throw std::invalid_argument("closure_residual: basis and structure constants differ in N");
    }
    const int dim = basis.dim();
    const auto& g = basis.generators;

    // commutator expansion: expected[i][j] = 2i Σ_k f_ijk Λ_k
    std::vector<Eigen::MatrixXcd> expected(static_cast<std::size_t>(dim * dim),
                                           Eigen::MatrixXcd::Zero(basis.n, basis.n));
    for (const auto& e : f.expanded()) {
        expected[static_cast<std::size_t>(e.i * dim + e.j)] += std::complex<double>(0.0, 2.0 * e.value) * g[e.k];
    }
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const Eigen::MatrixXcd comm = g[i] * g[j] - g[j] * g[i];
            worst = std::max(worst, (comm - expected[static_cast<std::size_t>(i * dim + j)]).norm());
        }
    }
    return worst;
}

double jacobi_residual(const StructureConstants& f) {
    const int dim = f.dim();
    std::vector<double> dense(static_cast<std::size_t>(dim * dim * dim), 0.0);
    auto at = [&](int a, int b, int c) -> double& {
        return dense[static_cast<std::size_t>((a * dim + b) * dim + c)];
    };
    for (const auto& e : f.expanded()) at(e.i, e.j, e.k) = e.value;

    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                for (int e = 0; e < dim; ++e) {
                    double sum = 0.0;
                    for (int d = 0; d < dim; ++d) {
                        sum += at(a, d, e) * at(b, c, d) + at(b, d, e) * at(c, a, d) + at(c, d, e) * at(a, b, d);
                    }
                    worst = std::max(worst, std::abs(sum));
                }
    return worst;
}

double basis_defect(const SuNBasis& basis) {
    const auto& g = basis.generators;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, (g[i] - g[i].adjoint()).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(g[i].trace()));
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double target = (i == j) ? 2.0 : 0.0;
            worst = std::max(worst, std::abs(trace_product(g[i], g[j]) - target));
        }
    }
    return worst;
}

SuNAlgebra make_algebra(int n) {
    SuNAlgebra algebra;
    algebra.basis = build_generators(n);
    algebra.f = compute_structure_constants(algebra.basis);
    algebra.d = compute_symmetric_constants(algebra.basis);
    return algebra;
}

} // namespace envprobe
