#include "gape/wgwa.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gape/errors.hpp"
#include "gape/numerics.hpp"

namespace gape {

Wgwa::Wgwa(DenseMatrix alpha_, DenseMatrix mu_, DenseMatrix tau_)
    : alpha(std::move(alpha_)), mu(std::move(mu_)), tau(std::move(tau_))
{
    if (!mu.is_square() || mu.rows() == 0) {
        throw InvalidArgument("Wgwa: mu must be a non-empty square matrix");
    }
    if (alpha.rows() != mu.rows() || tau.rows() != mu.rows() || tau.cols() != alpha.cols() ||
        alpha.cols() == 0) {
        throw InvalidArgument("Wgwa: expected alpha and tau k x m with k = " +
                              std::to_string(mu.rows()));
    }
    if (!alpha.all_finite() || !mu.all_finite() || !tau.all_finite()) {
        throw InvalidArgument("Wgwa: weights must be finite");
    }
}

std::string_view to_string(Scheme s) noexcept
{
    switch (s) {
    case Scheme::gape:
        return "gape";
    case Scheme::lape:
        return "lape";
    case Scheme::rw:
        return "rw";
    case Scheme::ppr_diag:
        return "ppr";
    case Scheme::pprp:
        return "pprp";
    case Scheme::sinusoidal:
        return "sinusoidal";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view s)
{
    for (Scheme c : {Scheme::gape, Scheme::lape, Scheme::rw, Scheme::ppr_diag, Scheme::pprp,
                     Scheme::sinusoidal}) {
        if (s == to_string(c)) {
            return c;
        }
    }
    throw InvalidArgument("unknown encoding scheme '" + std::string(s) + "'");
}

Wgwa init_damped(std::size_t k, std::size_t m, double gamma, std::uint64_t seed)
{
    if (k < 1 || m < 1) {
        throw InvalidArgument("init_damped: k and m must be at least 1");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("init_damped: gamma must be positive");
    }
    std::mt19937_64 rng(seed);
    DenseMatrix mu = random_orthogonal(k, rng);
    mu *= gamma;
    const DenseMatrix basis = random_orthogonal(std::max(k, m), rng);
    DenseMatrix alpha = basis.block(0, 0, k, m);
    return Wgwa(std::move(alpha), std::move(mu), DenseMatrix(k, m, 1.0));
}

DenseMatrix row_softmax(const DenseMatrix& m)
{
    DenseMatrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = out.row(i);
        const double hi = *std::max_element(r.begin(), r.end());
        double sum = 0.0;
        for (double& x : r) {
            x = std::exp(x - hi);
            sum += x;
        }
        for (double& x : r) {
            x /= sum;
        }
    }
    return out;
}

DenseMatrix column_softmax(const DenseMatrix& m)
{
    return row_softmax(m.transposed()).transposed();
}

SolveResult gape_states(const Wgwa& w, const DenseMatrix& transition, const DenseMatrix& labels,
                        SolveStrategy strategy, const Tolerances& tol)
{
    if (labels.rows() != w.labels()) {
        throw InvalidArgument("gape_states: label matrix has " + std::to_string(labels.rows()) +
                              " rows but the automaton has " + std::to_string(w.labels()) +
                              " labels");
    }
    const DenseMatrix source = matmul(w.alpha, labels);
    return solve_gape_system(w.mu, transition, source, strategy, tol);
}

EncodingMatrix gape_output(const Wgwa& w, const DenseMatrix& states, const DenseMatrix& labels)
{
    const DenseMatrix final_weights = matmul(w.tau, labels);
    EncodingMatrix e;
    e.scheme = Scheme::gape;
    e.values = hadamard(states, final_weights).transposed();
    e.meta.k_enc = w.states();
    if (!e.values.all_finite()) {
        throw NumericalError("GAPE encoding contains non-finite entries");
    }
    return e;
}

std::pair<EncodingMatrix, SolveReport> encode_gape(const LabeledGraph& g, const Wgwa& w,
                                                   SolveStrategy strategy, const Tolerances& tol)
{
    if (g.max_label() > static_cast<int>(w.labels())) {
        throw InvalidArgument("encode_gape: graph uses label " + std::to_string(g.max_label()) +
                              " but the automaton has only " + std::to_string(w.labels()));
    }
    const DenseMatrix labels = label_matrix(g, static_cast<int>(w.labels()));
    SolveResult solved;
    try {
        solved = gape_states(w, g.adjacency(), labels, strategy, tol);
    } catch (const NumericalError& e) {
        throw NumericalError("encode_gape on " + std::to_string(g.node_count()) + "-node graph (k = " +
                             std::to_string(w.states()) + "): " + e.what());
    }
    EncodingMatrix e = gape_output(w, solved.p, labels);
    e.meta.solver = solved.report.method;
    return {std::move(e), solved.report};
}

double run_weight(const LabeledGraph& g, const Wgwa& w, std::span<const Configuration> run)
{
    if (run.empty()) {
        throw InvalidArgument("run_weight: a run has at least one configuration");
    }
    for (const auto& c : run) {
        if (c.state >= w.states() || c.node >= g.node_count()) {
            throw InvalidArgument("run_weight: configuration out of range");
        }
        if (g.label(c.node) > static_cast<int>(w.labels())) {
            throw InvalidArgument("run_weight: node label exceeds automaton label count");
        }
    }
    const auto& first = run.front();
    const auto& last = run.back();
    double weight = w.alpha(first.state, static_cast<std::size_t>(g.label(first.node) - 1));
    for (std::size_t t = 0; t + 1 < run.size(); ++t) {
        if (!g.has_edge(run[t].node, run[t + 1].node)) {
            throw InvalidArgument("run_weight: no edge " + std::to_string(run[t].node + 1) +
                                  " -> " + std::to_string(run[t + 1].node + 1) + " at step " +
                                  std::to_string(t + 1));
        }
        weight *= w.mu(run[t + 1].state, run[t].state);
    }
    weight *= w.tau(last.state, static_cast<std::size_t>(g.label(last.node) - 1));
    return weight;
}

Wgwa sinusoidal_wgwa(std::size_t k)
{
    if (k == 0 || k % 2 != 0) {
        throw InvalidArgument("sinusoidal_wgwa: k must be a positive even number, got " +
                              std::to_string(k));
    }
    DenseMatrix alpha(k, 2);
    DenseMatrix mu(k, k);
    for (std::size_t j = 0; j < k / 2; ++j) {
        const double theta =
            -std::pow(10000.0, -2.0 * static_cast<double>(j) / static_cast<double>(k));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const std::size_t r = 2 * j;
        mu(r, r) = c;
        mu(r, r + 1) = -s;
        mu(r + 1, r) = s;
        mu(r + 1, r + 1) = c;
        alpha(r + 1, 0) = 1.0;
    }
    return Wgwa(std::move(alpha), std::move(mu), DenseMatrix(k, 2, 1.0));
}

EncodingMatrix encode_sinusoidal_via_wgwa(std::size_t length, std::size_t k)
{
    auto [e, report] = encode_gape(string_graph(length), sinusoidal_wgwa(k),
                                   SolveStrategy::fixed_point);
    e.scheme = Scheme::sinusoidal;
    e.meta.k_enc = k;
    e.meta.solver = report.method;
    return e;
}

}  // namespace gape
