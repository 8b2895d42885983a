// commutator.cpp: nested-commutator oracle, closed forms, identity checks

#include "envprobe/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "envprobe/errors.hpp"

namespace envprobe {

namespace {

using cd = std::complex<double>;
const cd kI{0.0, 1.0};

Eigen::MatrixXcd i_ad(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& x) {
    return kI * (h * x - x * h);
}

OpVec add(const OpVec& a, const OpVec& b) {
    OpVec out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

OpVec sum(const std::vector<OpVec>& terms) {
    OpVec out = terms.front();
    for (std::size_t t = 1; t < terms.size(); ++t) out = add(out, terms[t]);
    return out;
}

double frobenius(const OpVec& a, const OpVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
    return std::sqrt(s);
}

std::vector<TensorEntry> levi_civita_entries() {
    return {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0},
            {0, 2, 1, -1.0}, {2, 1, 0, -1.0}, {1, 0, 2, -1.0}};
}

} // namespace

std::vector<Eigen::Matrix3d> nested_derivative_matrices(const HamiltonianParams& params, const SuNBasis& basis,
                                                        int max_order) {
    if (max_order < 1) throw std::invalid_argument("derivative order must be >= 1");
    const Eigen::MatrixXcd h = assemble_hamiltonian(params, basis);
    const int n = params.n;
    std::array<Eigen::MatrixXcd, 3> sigma;
    for (int j = 0; j < 3; ++j) sigma[static_cast<std::size_t>(j)] = system_operator(j, n);

    std::vector<Eigen::Matrix3d> out(static_cast<std::size_t>(max_order), Eigen::Matrix3d::Zero());
    for (int j = 0; j < 3; ++j) {
        Eigen::MatrixXcd x = sigma[static_cast<std::size_t>(j)];
        for (int order = 1; order <= max_order; ++order) {
            x = i_ad(h, x);
            const cd tr = x.trace();
            for (int k = 0; k < 3; ++k) {
                // Tr[(1 + Σ_k)/2 ⊗ 1/N · X]
                const cd v = (tr + (sigma[static_cast<std::size_t>(k)] * x).trace()) / (2.0 * n);
                if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
                    throw NumericalError("nested commutator trace has imaginary residue " +
                                         std::to_string(v.imag()) + " at order " + std::to_string(order));
                }
                out[static_cast<std::size_t>(order - 1)](j, k) = v.real();
            }
        }
    }
    return out;
}

Eigen::Matrix3d nested_derivative_matrix(const HamiltonianParams& params, const SuNBasis& basis, int order) {
    return nested_derivative_matrices(params, basis, order).back();
}

Eigen::Matrix3d adot_closed_form(const HamiltonianParams& params) {
    const Eigen::Vector3d& a = params.alpha;
    Eigen::Matrix3d m;
    m << 0.0, -a(2), a(1),
         a(2), 0.0, -a(0),
         -a(1), a(0), 0.0;
    return m;
}

Eigen::Matrix3d addot_closed_form(const HamiltonianParams& params) {
    const double c = 2.0 / params.n;
    const Eigen::Vector3d& a = params.alpha;
    const Eigen::Matrix3d g = params.gamma * params.gamma.transpose();
    return a * a.transpose() + c * g - (a.squaredNorm() + c * g.trace()) * Eigen::Matrix3d::Identity();
}

Eigen::Matrix3d tridot_closed_form(const HamiltonianParams& params, const StructureConstants& f,
                                   const SymmetricConstants& d) {
    const double c = 2.0 / params.n;
    const Eigen::Vector3d& a = params.alpha;
    const GammaMatrix& gamma = params.gamma;
    const Eigen::Matrix3d g = gamma * gamma.transpose();
    const Eigen::MatrixXd k = gamma.transpose() * gamma;

    Eigen::Vector3d v = a * (a.squaredNorm() + c * g.trace()) + 2.0 * c * g * a;
    for (const auto& e : d.expanded()) v += c * e.value * k(e.i, e.j) * gamma.col(e.k);

    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    for (const auto& e : levi_civita_entries()) out(e.i, e.j) += e.value * v(e.k);
    for (const auto& e : f.expanded()) out += c * e.value * params.beta(e.i) * gamma.col(e.j) * gamma.col(e.k).transpose();
    return out;
}

// ---------------------------------------------------------------------------

CrossContraction CrossContraction::levi_civita() {
    return CrossContraction(3, levi_civita_entries());
}

CrossContraction CrossContraction::structure(const StructureConstants& f) {
    return CrossContraction(f.dim(), f.expanded());
}

OpVec CrossContraction::operator()(const OpVec& x, const OpVec& y) const {
    if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_) {
        throw std::invalid_argument("cross contraction: operand length mismatch");
    }
    const auto rows = x.front().rows();
    OpVec out(static_cast<std::size_t>(dim_), Eigen::MatrixXcd::Zero(rows, rows));
    for (const auto& e : entries_)
        out[static_cast<std::size_t>(e.i)] += e.value * (x[static_cast<std::size_t>(e.j)] * y[static_cast<std::size_t>(e.k)]);
    return out;
}

Eigen::VectorXd CrossContraction::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("cross contraction: operand length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
    for (const auto& e : entries_) out(e.i) += e.value * x(e.j) * y(e.k);
    return out;
}

JointOperators::JointOperators(const SuNBasis& basis) : n(basis.n) {
    identity = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    for (int j = 0; j < 3; ++j) sigma.push_back(system_operator(j, n));
    for (const auto& g : basis.generators) lambda.push_back(kron(Eigen::Matrix2cd::Identity(), g));
}

OpVec JointOperators::scalar(const Eigen::VectorXd& x) const {
    OpVec out;
    for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i) * identity);
    return out;
}

OpVec gamma_dot(const GammaMatrix& gamma, const OpVec& v) {
    if (static_cast<Eigen::Index>(v.size()) != gamma.cols()) throw std::invalid_argument("gamma_dot: length mismatch");
    const auto rows = v.front().rows();
    OpVec out(3, Eigen::MatrixXcd::Zero(rows, rows));
    for (int i = 0; i < 3; ++i)
        for (Eigen::Index k = 0; k < gamma.cols(); ++k)
            if (gamma(i, k) != 0.0) out[static_cast<std::size_t>(i)] += gamma(i, k) * v[static_cast<std::size_t>(k)];
    return out;
}

OpVec dot_gamma(const OpVec& v, const GammaMatrix& gamma) {
    if (v.size() != 3) throw std::invalid_argument("dot_gamma: expected a 3-vector");
    const auto rows = v.front().rows();
    OpVec out(static_cast<std::size_t>(gamma.cols()), Eigen::MatrixXcd::Zero(rows, rows));
    for (Eigen::Index l = 0; l < gamma.cols(); ++l)
        for (int j = 0; j < 3; ++j)
            if (gamma(j, l) != 0.0) out[static_cast<std::size_t>(l)] += gamma(j, l) * v[static_cast<std::size_t>(j)];
    return out;
}

// ---------------------------------------------------------------------------

double verify_replacement_rules(const SuNAlgebra& algebra, int trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const int n = algebra.n();
    const int m = algebra.dim();
    const auto eps = CrossContraction::levi_civita();
    const auto fx = CrossContraction::structure(algebra.f);
    const JointOperators joint(algebra.basis);

    OpVec pauli_vec(pauli().begin(), pauli().end());
    const OpVec& lambda = algebra.basis.generators;
    const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::MatrixXcd idn = Eigen::MatrixXcd::Identity(n, n);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd r(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index i = 0; i < rows; ++i) r(i, c) = normal(rng);
        return r;
    };
    auto scalars = [](const Eigen::VectorXd& x, const Eigen::MatrixXcd& id) {
        OpVec out;
        for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i) * id);
        return out;
    };
    auto dot = [](const Eigen::VectorXd& x, const OpVec& ops) {
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(ops.front().rows(), ops.front().cols());
        for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * ops[static_cast<std::size_t>(i)];
        return s;
    };
    auto commutator_residual = [](const Eigen::MatrixXcd& a, const OpVec& b, const OpVec& rhs) {
        double s = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) s += (a * b[i] - b[i] * a - rhs[i]).squaredNorm();
        return std::sqrt(s);
    };

    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        // Σ rule
        {
            const Eigen::VectorXd x = draw(3, 1), y = draw(3, 1);
            const OpVec lhs_b = eps(scalars(y, id2), pauli_vec);
            OpVec rhs = eps(scalars(y, id2), eps(scalars(x, id2), pauli_vec));
            for (auto& r : rhs) r *= -2.0 * kI;
            worst = std::max(worst, commutator_residual(dot(x, pauli_vec), lhs_b, rhs));
        }
        // Λ rule
        {
            const Eigen::VectorXd x = draw(m, 1), y = draw(m, 1);
            const OpVec lhs_b = fx(scalars(y, idn), lambda);
            OpVec rhs = fx(scalars(y, idn), fx(scalars(x, idn), lambda));
            for (auto& r : rhs) r *= -2.0 * kI;
            worst = std::max(worst, commutator_residual(dot(x, lambda), lhs_b, rhs));
        }
        // product rule, both operand orders of the bilinear form
        {
            const GammaMatrix gamma = draw(3, m);
            const Eigen::MatrixXd coef = draw(3, m);
            const OpVec sg = dot_gamma(joint.sigma, gamma);
            Eigen::MatrixXcd coupling = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
            for (int l = 0; l < m; ++l) coupling += sg[static_cast<std::size_t>(l)] * joint.lambda[static_cast<std::size_t>(l)];
            const OpVec gl_s = eps(gamma_dot(gamma, joint.lambda), joint.sigma);
            const OpVec sg_l = fx(sg, joint.lambda);
            for (bool lambda_first : {false, true}) {
                auto h = [&](const OpVec& s, const OpVec& l) {
                    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < m; ++b) {
                            const auto& sa = s[static_cast<std::size_t>(a)];
                            const auto& lb = l[static_cast<std::size_t>(b)];
                            out += coef(a, b) * (lambda_first ? Eigen::MatrixXcd(lb * sa) : Eigen::MatrixXcd(sa * lb));
                        }
                    return out;
                };
                const Eigen::MatrixXcd hv = h(joint.sigma, joint.lambda);
                const Eigen::MatrixXcd lhs = coupling * hv - hv * coupling;
                const Eigen::MatrixXcd rhs = -2.0 * kI * h(gl_s, joint.lambda) - 2.0 * kI * h(joint.sigma, sg_l);
                worst = std::max(worst, (lhs - rhs).norm());
            }
        }
    }
    return worst;
}

namespace {

// Shared building blocks of the double and triple commutator expansions.
struct Expansion {
    CrossContraction eps = CrossContraction::levi_civita();
    CrossContraction fx;
    JointOperators joint;
    GammaMatrix gamma;
    OpVec a, b, s, lam;
    OpVec gl;    // γ·Λ
    OpVec sg;    // Σ·γ
    OpVec bl;    // β×Λ
    OpVec sgl;   // (Σ·γ)×Λ
    OpVec as;    // α×Σ
    OpVec gs;    // γ·Λ×Σ
    Eigen::MatrixXcd h;

    Expansion(const HamiltonianParams& params, const SuNAlgebra& algebra)
        : fx(CrossContraction::structure(algebra.f)), joint(algebra.basis), gamma(params.gamma) {
        if (params.n != algebra.n()) throw std::invalid_argument("parameter and algebra dimensions differ");
        a = joint.scalar(params.alpha);
        b = joint.scalar(params.beta);
        s = joint.sigma;
        lam = joint.lambda;
        gl = gamma_dot(gamma, lam);
        sg = dot_gamma(s, gamma);
        bl = fx(b, lam);
        sgl = fx(sg, lam);
        as = eps(a, s);
        gs = eps(gl, s);
        h = assemble_hamiltonian(params, algebra.basis);
    }

    OpVec e(const OpVec& x, const OpVec& y) const { return eps(x, y); }
    OpVec f(const OpVec& x, const OpVec& y) const { return fx(x, y); }
    OpVec g(const OpVec& v) const { return gamma_dot(gamma, v); }
    OpVec dg(const OpVec& v) const { return dot_gamma(v, gamma); }

    std::array<OpVec, 6> double_terms() const {
        return {e(a, as), e(a, gs), e(gl, as), e(gl, gs), e(g(bl), s), e(g(sgl), s)};
    }

    OpVec apply(const OpVec& x) const {
        OpVec out;
        for (const auto& xi : x) out.push_back(i_ad(h, xi));
        return out;
    }
};

} // namespace

double verify_double_commutator(const HamiltonianParams& params, const SuNAlgebra& algebra) {
    params.validate();
    const Expansion ex(params, algebra);
    const auto terms = ex.double_terms();
    const OpVec rhs = sum({terms.begin(), terms.end()});
    return frobenius(ex.apply(ex.apply(ex.s)), rhs);
}

TripleCommutatorCheck verify_triple_commutator(const HamiltonianParams& params, const SuNAlgebra& algebra) {
    params.validate();
    const Expansion ex(params, algebra);
    const OpVec &a = ex.a, &s = ex.s, &gl = ex.gl, &sg = ex.sg;
    const OpVec &bl = ex.bl, &sgl = ex.sgl, &as = ex.as, &gs = ex.gs;
    auto e = [&](const OpVec& x, const OpVec& y) { return ex.e(x, y); };
    auto f = [&](const OpVec& x, const OpVec& y) { return ex.f(x, y); };
    auto g = [&](const OpVec& v) { return ex.g(v); };
    auto dg = [&](const OpVec& v) { return ex.dg(v); };

    const OpVec gbl = g(bl);
    const OpVec gsgl = g(sgl);
    const std::array<std::vector<OpVec>, 6> expanded = {{
        {e(a, e(a, as)), e(a, e(a, gs))},
        {e(a, e(gl, as)), e(a, e(gbl, s)), e(a, e(gsgl, s)), e(a, e(gl, gs))},
        {e(gl, e(a, as)), e(gbl, as), e(gsgl, as), e(gl, e(a, gs))},
        {e(gl, e(gl, as)), e(gbl, gs), e(gl, e(gbl, s)), e(gsgl, gs), e(gl, e(gsgl, s)), e(gl, e(gl, gs))},
        {e(gbl, as), e(g(f(ex.b, bl)), s), e(g(f(ex.b, sgl)), s), e(gbl, gs)},
        {e(g(f(dg(as), ex.lam)), s), e(g(f(sg, bl)), s), e(gsgl, as), e(g(f(sg, sgl)), s),
         e(g(f(dg(gs), ex.lam)), s), e(gsgl, gs)},
    }};

    const auto terms = ex.double_terms();
    TripleCommutatorCheck check;
    std::vector<OpVec> all;
    for (std::size_t p = 0; p < 6; ++p) {
        const OpVec rhs = sum(expanded[p]);
        check.pieces[p] = frobenius(ex.apply(terms[p]), rhs);
        all.push_back(rhs);
    }
    check.total = frobenius(ex.apply(ex.apply(ex.apply(s))), sum(all));
    return check;
}

} // namespace envprobe
