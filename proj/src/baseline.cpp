#include "gape/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gape/errors.hpp"
#include "gape/numerics.hpp"

namespace gape {

namespace {

void require_undirected(const LabeledGraph& g, const char* who)
{
    if (g.directed()) {
        throw InvalidArgument(std::string(who) +
                              ": graph must be undirected (symmetrize it first)");
    }
}

void check_beta(double beta)
{
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw InvalidArgument("PPR: beta must lie in (0, 1], got " + std::to_string(beta));
    }
}

}  // namespace

EncodingMatrix reference_sinusoidal(std::size_t length, std::size_t k)
{
    if (k == 0 || k % 2 != 0) {
        throw InvalidArgument("reference_sinusoidal: k must be a positive even number");
    }
    EncodingMatrix e;
    e.scheme = Scheme::sinusoidal;
    e.values = DenseMatrix(length, k);
    e.meta.k_enc = k;
    for (std::size_t j = 0; j < k / 2; ++j) {
        const double freq =
            std::pow(10000.0, -2.0 * static_cast<double>(j) / static_cast<double>(k));
        for (std::size_t p = 0; p < length; ++p) {
            const double angle = static_cast<double>(p) * freq;
            e.values(p, 2 * j) = std::sin(angle);
            e.values(p, 2 * j + 1) = std::cos(angle);
        }
    }
    return e;
}

EncodingMatrix lape(const LabeledGraph& g, std::size_t k_enc)
{
    require_undirected(g, "lape");
    const std::size_t n = g.node_count();
    if (k_enc > n) {
        throw InvalidArgument("lape: requested " + std::to_string(k_enc) +
                              " eigenvectors but the graph has only " + std::to_string(n) +
                              " nodes");
    }
    const EigenDecomposition eig = eig_symmetric(laplacian(g));
    EncodingMatrix e;
    e.scheme = Scheme::lape;
    e.values = eig.vectors.block(0, 0, n, k_enc);
    e.meta.k_enc = k_enc;
    return e;
}

LapeConstruction lape_wgwa_construction(const LabeledGraph& g, double max_residual)
{
    require_undirected(g, "lape_wgwa_construction");
    const std::size_t n = g.node_count();
    const DenseMatrix lap = laplacian(g);
    const EigenDecomposition eig = eig_symmetric(lap);
    const double zero = default_tolerances().zero_eigenvalue;

    LapeConstruction out;
    DenseMatrix mu(n, n);
    std::vector<bool> active(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        if (std::abs(eig.values[q]) <= zero) {
            ++out.zero_modes;
            continue;
        }
        mu(q, q) = 1.0 / eig.values[q];
        active[q] = true;
    }
    // m = 1, alpha = 0, tau = 1.
    out.wgwa = Wgwa(DenseMatrix(n, 1), std::move(mu), DenseMatrix(n, 1, 1.0));

    const DenseMatrix p = eig.vectors.transposed();
    const DenseMatrix resid = p - matmul(out.wgwa.mu, matmul(p, lap));
    for (std::size_t q = 0; q < n; ++q) {
        if (!active[q]) {
            continue;
        }
        for (double x : resid.row(q)) {
            out.residual = std::max(out.residual, std::abs(x));
        }
    }
    if (!(out.residual <= max_residual)) {
        throw NumericalError("lape_wgwa_construction: residual " + std::to_string(out.residual) +
                             " exceeds " + std::to_string(max_residual));
    }
    // A single label shared by every node, whatever labels g carries.
    const DenseMatrix labels(1, n, 1.0);
    out.encoding = gape_output(out.wgwa, p, labels);
    return out;
}

EncodingMatrix rw_encoding(const LabeledGraph& g, std::size_t k_enc)
{
    const DenseMatrix w = walk_matrix(g);
    const std::size_t n = g.node_count();
    EncodingMatrix e;
    e.scheme = Scheme::rw;
    e.values = DenseMatrix(n, k_enc);
    e.meta.k_enc = k_enc;
    DenseMatrix power = w;
    for (std::size_t i = 0; i < k_enc; ++i) {
        if (i > 0) {
            power = matmul(power, w);
        }
        for (std::size_t u = 0; u < n; ++u) {
            e.values(u, i) = power(u, u);
        }
    }
    return e;
}

DenseMatrix ppr_matrix(const LabeledGraph& g, double beta, const DenseMatrix& walk)
{
    check_beta(beta);
    const std::size_t n = g.node_count();
    if (walk.rows() != n || walk.cols() != n) {
        throw InvalidArgument("ppr_matrix: walk matrix does not match the graph size");
    }
    // Pi M = beta I with M = I - (1 - beta) W, solved as M^T Pi^T = beta I.
    DenseMatrix system = walk.transposed();
    system *= -(1.0 - beta);
    for (std::size_t i = 0; i < n; ++i) {
        system(i, i) += 1.0;
    }
    DenseMatrix rhs = DenseMatrix::identity(n);
    rhs *= beta;
    DenseMatrix pi;
    try {
        pi = LuFactorization(std::move(system)).solve(rhs).transposed();
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("ppr_matrix: singular system: ") + e.what());
    }
    DenseMatrix resid = pi - matmul(pi, walk) * (1.0 - beta);
    for (std::size_t i = 0; i < n; ++i) {
        resid(i, i) -= beta;
    }
    const double r = resid.max_abs();
    if (!(r <= 1e-9 * std::max(1.0, pi.max_abs()))) {
        throw NumericalError("ppr_matrix: residual " + std::to_string(r) + " too large");
    }
    return pi;
}

DenseMatrix ppr_matrix(const LabeledGraph& g, double beta)
{
    return ppr_matrix(g, beta, walk_matrix(g));
}

EncodingMatrix ppr_diag_encoding(const LabeledGraph& g, double beta)
{
    const DenseMatrix pi = ppr_matrix(g, beta);
    EncodingMatrix e;
    e.scheme = Scheme::ppr_diag;
    e.values = DenseMatrix(g.node_count(), 1, pi.diag());
    e.meta.beta = beta;
    e.meta.k_enc = 1;
    return e;
}

EncodingMatrix pprp_encoding(const LabeledGraph& g, double beta, std::size_t k_enc)
{
    check_beta(beta);
    const DenseMatrix w = walk_matrix(g);
    const std::size_t n = g.node_count();
    EncodingMatrix e;
    e.scheme = Scheme::pprp;
    e.values = DenseMatrix(n, k_enc);
    e.meta.beta = beta;
    e.meta.k_enc = k_enc;
    DenseMatrix power = w;
    for (std::size_t i = 0; i < k_enc; ++i) {
        if (i > 0) {
            power = matmul(power, w);
        }
        const DenseMatrix pi = ppr_matrix(g, beta, power);
        for (std::size_t u = 0; u < n; ++u) {
            e.values(u, i) = pi(u, u);
        }
    }
    return e;
}

EncodingMatrix gape_as_ppr(const LabeledGraph& g, double beta, SolveStrategy strategy)
{
    check_beta(beta);
    const std::size_t n = g.node_count();
    const DenseMatrix w = walk_matrix(g);
    const DenseMatrix labels = label_matrix(with_distinct_labels(g), static_cast<int>(n));
    EncodingMatrix e;
    e.scheme = Scheme::gape;
    e.values = DenseMatrix(n, n);
    e.meta.beta = beta;
    e.meta.k_enc = 1;
    for (std::size_t u = 0; u < n; ++u) {
        DenseMatrix alpha(1, n);
        alpha(0, u) = beta;
        const Wgwa automaton(std::move(alpha), DenseMatrix(1, 1, 1.0 - beta),
                             DenseMatrix(1, n, 1.0));
        const SolveResult solved = gape_states(automaton, w, labels, strategy);
        const EncodingMatrix row = gape_output(automaton, solved.p, labels);
        for (std::size_t v = 0; v < n; ++v) {
            e.values(u, v) = row.values(v, 0);
        }
        e.meta.solver = solved.report.method;
    }
    return e;
}

EncodingMatrix minmax_normalize(const EncodingMatrix& e)
{
    EncodingMatrix out = e;
    const std::size_t n = e.values.rows();
    for (std::size_t j = 0; j < e.values.cols(); ++j) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = e.values(i, j);
            lo = i == 0 ? x : std::min(lo, x);
            hi = i == 0 ? x : std::max(hi, x);
        }
        const double range = hi - lo;
        for (std::size_t i = 0; i < n; ++i) {
            out.values(i, j) = range > 0.0 ? (e.values(i, j) - lo) / range : 0.0;
        }
    }
    return out;
}

}  // namespace gape
