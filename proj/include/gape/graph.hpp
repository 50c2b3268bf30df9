#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gape/matrix.hpp"

namespace gape {

/// Node-labelled graph with a {0,1} adjacency matrix.
///
/// Nodes are 0-indexed here; the JSON format and every user-facing message use
/// 1-indexed nodes. Labels are 1-based (label 1 is the first column of alpha).
/// Undirected graphs always carry a symmetric adjacency matrix.
class LabeledGraph {
public:
    LabeledGraph(std::vector<int> labels, DenseMatrix adjacency, bool directed);

    /// Builds from a 0-indexed edge list. Undirected edges are inserted both ways.
    static LabeledGraph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                                   bool directed, std::vector<int> labels = {});

    std::size_t node_count() const noexcept { return labels_.size(); }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int label(std::size_t v) const { return labels_.at(v); }
    /// Largest label in use (the minimal admissible m).
    int max_label() const noexcept;
    const DenseMatrix& adjacency() const noexcept { return adjacency_; }
    bool directed() const noexcept { return directed_; }

    bool has_edge(std::size_t u, std::size_t v) const { return adjacency_(u, v) != 0.0; }
    /// Directed: number of nonzero entries. Undirected: number of unordered pairs
    /// (self-loops counted once).
    std::size_t edge_count() const noexcept;
    /// 0-indexed edge list; undirected graphs list each pair once with u <= v.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    bool operator==(const LabeledGraph&) const = default;

private:
    std::vector<int> labels_;
    DenseMatrix adjacency_;
    bool directed_;
};

/// Undirected copy with A <- max(A, A^T). Idempotent.
LabeledGraph symmetrized(const LabeledGraph& g);

/// Same adjacency, labels 1..n in node order (one label per node, m = n).
LabeledGraph with_distinct_labels(const LabeledGraph& g);

/// Relabels nodes: node v of g becomes node perm[v] of the result.
LabeledGraph permuted(const LabeledGraph& g, std::span<const std::size_t> perm);

/// Directed path 1 -> 2 -> ... -> length; node 1 has label 1, every other node label 2.
LabeledGraph string_graph(std::size_t length);

/// Undirected n-cycle, all labels 1. Requires n >= 3.
LabeledGraph cycle_graph(std::size_t n);

/// G(n, p): every unordered pair independently with probability p, all labels 1.
LabeledGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Circular skip-link graph: the n-cycle plus links i <-> i + skip (mod n).
/// 4-regular; skip values that collapse onto cycle edges or onto each other are rejected.
LabeledGraph csl_graph(std::size_t n, std::size_t skip);

/// Degrees of the symmetrized adjacency.
Vector degrees(const LabeledGraph& g);
DenseMatrix degree_matrix(const LabeledGraph& g);

/// L = D - A on the symmetrized graph.
DenseMatrix laplacian(const LabeledGraph& g);

/// W = A D^{-1} on the symmetrized graph (column-stochastic).
/// Throws InvalidArgument naming the first isolated node.
DenseMatrix walk_matrix(const LabeledGraph& g);

/// One-hot m x n label matrix: column v has a 1 in row label(v) - 1.
DenseMatrix label_matrix(const LabeledGraph& g, int m);

/// Number of connected components of the symmetrized graph.
std::size_t component_count(const LabeledGraph& g);

}  // namespace gape
