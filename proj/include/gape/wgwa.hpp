#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "gape/graph.hpp"
#include "gape/matrix.hpp"
#include "gape/sylvester.hpp"

namespace gape {

/// Weighted graph-walking automaton with k states over m node labels.
///
///   alpha (k x m)  initial weights: a run may start in state q on a node labelled a
///                  with weight alpha(q, a)
///   mu    (k x k)  transition weights, label independent
///   tau   (k x m)  final weights
///
/// The encoding solves P = mu P A + alpha l, so the weight of moving from state q
/// to state r along an edge is mu(r, q).
struct Wgwa {
    DenseMatrix alpha;
    DenseMatrix mu;
    DenseMatrix tau;

    Wgwa() = default;
    /// Validates shapes and finiteness.
    Wgwa(DenseMatrix alpha, DenseMatrix mu, DenseMatrix tau);

    std::size_t states() const noexcept { return mu.rows(); }
    std::size_t labels() const noexcept { return alpha.cols(); }

    bool operator==(const Wgwa&) const = default;
};

enum class Scheme { gape, lape, rw, ppr_diag, pprp, sinusoidal };

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view s);

/// Parameters an encoding was produced with. Unset fields did not apply.
struct EncodingMeta {
    std::optional<double> gamma;
    std::optional<double> beta;
    std::optional<std::size_t> k_enc;
    std::optional<std::uint64_t> seed;
    std::optional<SolveMethod> solver;
};

/// n x k_enc matrix, one row per node, shared by every scheme.
struct EncodingMatrix {
    Scheme scheme = Scheme::gape;
    DenseMatrix values;
    EncodingMeta meta;

    std::size_t nodes() const noexcept { return values.rows(); }
    std::size_t dims() const noexcept { return values.cols(); }
};

/// mu = gamma * (random orthogonal k x k); alpha = top-left k x m block of a random
/// orthogonal max(k, m) matrix (orthonormal columns when m <= k); tau = ones.
Wgwa init_damped(std::size_t k, std::size_t m, double gamma, std::uint64_t seed);

/// Softmax over each row of mu (the normalized GAPE variant).
DenseMatrix row_softmax(const DenseMatrix& m);
/// Softmax over each column of alpha.
DenseMatrix column_softmax(const DenseMatrix& m);

/// Solves P = mu P T + alpha L for a general transition matrix T (n x n) and
/// label matrix L (m x n). encode_gape uses T = adjacency, L = label_matrix(g, m).
SolveResult gape_states(const Wgwa& w, const DenseMatrix& transition, const DenseMatrix& labels,
                        SolveStrategy strategy, const Tolerances& tol = default_tolerances());

/// Row v of the result is P(:, v) o (tau l)(:, v).
EncodingMatrix gape_output(const Wgwa& w, const DenseMatrix& states, const DenseMatrix& labels);

std::pair<EncodingMatrix, SolveReport> encode_gape(const LabeledGraph& g, const Wgwa& w,
                                                   SolveStrategy strategy,
                                                   const Tolerances& tol = default_tolerances());

/// One step of a run: automaton state and graph node, both 0-indexed.
struct Configuration {
    std::size_t state;
    std::size_t node;
};

/// alpha(q1, l(v1)) * prod_t mu(q_{t+1}, q_t) * tau(qT, l(vT)).
/// Each consecutive pair of nodes must be joined by an edge v_t -> v_{t+1}.
double run_weight(const LabeledGraph& g, const Wgwa& w, std::span<const Configuration> run);

/// Automaton whose encodings on string_graph(n) are the transformer sinusoidal
/// encodings: two labels, rotation blocks with angles theta_j = -10000^{-2(j-1)/k}.
/// mu holds each block as [cos -sin; sin cos] since P is propagated as columns.
Wgwa sinusoidal_wgwa(std::size_t k);

/// encode_gape(string_graph(length), sinusoidal_wgwa(k), fixed point).
EncodingMatrix encode_sinusoidal_via_wgwa(std::size_t length, std::size_t k);

}  // namespace gape
