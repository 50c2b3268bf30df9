#include "gape/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "gape/errors.hpp"

namespace gape {

LabeledGraph::LabeledGraph(std::vector<int> labels, DenseMatrix adjacency, bool directed)
    : labels_(std::move(labels)), adjacency_(std::move(adjacency)), directed_(directed)
{
    const std::size_t n = labels_.size();
    if (adjacency_.rows() != n || adjacency_.cols() != n) {
        throw InvalidArgument("graph: adjacency is " + std::to_string(adjacency_.rows()) + "x" +
                              std::to_string(adjacency_.cols()) + " but there are " +
                              std::to_string(n) + " labels");
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (labels_[v] < 1) {
            throw InvalidArgument("graph: node " + std::to_string(v + 1) + " has label " +
                                  std::to_string(labels_[v]) + " (labels start at 1)");
        }
    }
    for (double x : adjacency_.data()) {
        if (x != 0.0 && x != 1.0) {
            throw InvalidArgument("graph: adjacency entries must be 0 or 1");
        }
    }
    if (!directed_ && asymmetry(adjacency_) != 0.0) {
        throw InvalidArgument("graph: undirected graph with asymmetric adjacency");
    }
}

LabeledGraph LabeledGraph::from_edges(std::size_t n,
                                      std::span<const std::pair<std::size_t, std::size_t>> edges,
                                      bool directed, std::vector<int> labels)
{
    if (labels.empty()) {
        labels.assign(n, 1);
    }
    DenseMatrix a(n, n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw InvalidArgument("graph: edge (" + std::to_string(u + 1) + "," +
                                  std::to_string(v + 1) + ") references a node outside 1.." +
                                  std::to_string(n));
        }
        a(u, v) = 1.0;
        if (!directed) {
            a(v, u) = 1.0;
        }
    }
    return LabeledGraph(std::move(labels), std::move(a), directed);
}

int LabeledGraph::max_label() const noexcept
{
    return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
}

std::size_t LabeledGraph::edge_count() const noexcept
{
    std::size_t count = 0;
    const std::size_t n = node_count();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = directed_ ? 0 : u; v < n; ++v) {
            if (adjacency_(u, v) != 0.0) {
                ++count;
            }
        }
    }
    return count;
}

std::vector<std::pair<std::size_t, std::size_t>> LabeledGraph::edges() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = node_count();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = directed_ ? 0 : u; v < n; ++v) {
            if (adjacency_(u, v) != 0.0) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

LabeledGraph symmetrized(const LabeledGraph& g)
{
    if (!g.directed()) {
        return g;
    }
    DenseMatrix a = g.adjacency();
    const std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = std::max(a(i, j), g.adjacency()(j, i));
        }
    }
    return LabeledGraph(g.labels(), std::move(a), false);
}

LabeledGraph with_distinct_labels(const LabeledGraph& g)
{
    std::vector<int> labels(g.node_count());
    std::iota(labels.begin(), labels.end(), 1);
    return LabeledGraph(std::move(labels), g.adjacency(), g.directed());
}

LabeledGraph permuted(const LabeledGraph& g, std::span<const std::size_t> perm)
{
    const std::size_t n = g.node_count();
    if (perm.size() != n) {
        throw InvalidArgument("permuted: permutation length differs from node count");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) {
            throw InvalidArgument("permuted: not a permutation");
        }
        seen[p] = true;
    }
    std::vector<int> labels(n);
    DenseMatrix a(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        labels[perm[u]] = g.label(u);
        for (std::size_t v = 0; v < n; ++v) {
            a(perm[u], perm[v]) = g.adjacency()(u, v);
        }
    }
    return LabeledGraph(std::move(labels), std::move(a), g.directed());
}

LabeledGraph string_graph(std::size_t length)
{
    if (length < 1) {
        throw InvalidArgument("string_graph: length must be at least 1");
    }
    std::vector<int> labels(length, 2);
    labels[0] = 1;
    DenseMatrix a(length, length);
    for (std::size_t i = 0; i + 1 < length; ++i) {
        a(i, i + 1) = 1.0;
    }
    return LabeledGraph(std::move(labels), std::move(a), true);
}

LabeledGraph cycle_graph(std::size_t n)
{
    if (n < 3) {
        throw InvalidArgument("cycle_graph: need n >= 3, got " + std::to_string(n));
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + 1) % n);
    }
    return LabeledGraph::from_edges(n, edges, false);
}

LabeledGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("erdos_renyi: p must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Draw for every pair so the stream does not depend on p.
            const double u = unif(rng);
            if (u < p) {
                a(i, j) = a(j, i) = 1.0;
            }
        }
    }
    return LabeledGraph(std::vector<int>(n, 1), std::move(a), false);
}

LabeledGraph csl_graph(std::size_t n, std::size_t skip)
{
    if (n < 5) {
        throw InvalidArgument("csl_graph: need n >= 5 for a 4-regular skip-link graph");
    }
    const std::size_t s = skip % n;
    // s = 0 is a self-loop, s = +-1 is a cycle edge, 2s = n makes i and i+s share one link.
    if (s == 0 || s == 1 || s == n - 1 || 2 * s == n) {
        throw InvalidArgument("csl_graph: skip " + std::to_string(skip) +
                              " is degenerate for n = " + std::to_string(n));
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + 1) % n);
        edges.emplace_back(i, (i + s) % n);
    }
    return LabeledGraph::from_edges(n, edges, false);
}

Vector degrees(const LabeledGraph& g)
{
    const LabeledGraph u = symmetrized(g);
    const std::size_t n = u.node_count();
    Vector d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (double x : u.adjacency().row(i)) {
            d[i] += x;
        }
    }
    return d;
}

DenseMatrix degree_matrix(const LabeledGraph& g)
{
    return DenseMatrix::diagonal(degrees(g));
}

DenseMatrix laplacian(const LabeledGraph& g)
{
    return degree_matrix(g) - symmetrized(g).adjacency();
}

DenseMatrix walk_matrix(const LabeledGraph& g)
{
    const Vector d = degrees(g);
    DenseMatrix w = symmetrized(g).adjacency();
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] == 0.0) {
            throw InvalidArgument("walk_matrix: node " + std::to_string(j + 1) +
                                  " is isolated (degree 0)");
        }
    }
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t j = 0; j < w.cols(); ++j) {
            w(i, j) /= d[j];
        }
    }
    return w;
}

DenseMatrix label_matrix(const LabeledGraph& g, int m)
{
    if (m < 1) {
        throw InvalidArgument("label_matrix: m must be positive");
    }
    DenseMatrix l(static_cast<std::size_t>(m), g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const int lab = g.label(v);
        if (lab > m) {
            throw InvalidArgument("label_matrix: node " + std::to_string(v + 1) + " has label " +
                                  std::to_string(lab) + " > m = " + std::to_string(m));
        }
        l(static_cast<std::size_t>(lab - 1), v) = 1.0;
    }
    return l;
}

std::size_t component_count(const LabeledGraph& g)
{
    const LabeledGraph u = symmetrized(g);
    const std::size_t n = u.node_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t comps = n;
    for (auto [a, b] : u.edges()) {
        const std::size_t ra = find(a);
        const std::size_t rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --comps;
        }
    }
    return comps;
}

}  // namespace gape
