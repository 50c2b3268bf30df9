#pragma once

// Reference computations that share no code path with the library solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "gape/graph.hpp"
#include "gape/matrix.hpp"
#include "gape/wgwa.hpp"

namespace oracle {

using gape::DenseMatrix;
using gape::LabeledGraph;
using gape::Wgwa;

// Sums the weight of every run that ends in (q, v), by listing each walk of the
// graph and every state sequence along it. Final weights are not applied.
// Only terminates on acyclic graphs.
inline DenseMatrix enumerate_runs(const LabeledGraph& g, const Wgwa& w)
{
    const std::size_t n = g.node_count();
    const std::size_t k = w.mu.rows();
    DenseMatrix p(k, n);
    std::vector<std::size_t> walk;
    std::vector<std::size_t> states;

    // Every assignment of states to the current walk.
    std::function<void(std::size_t, double)> assign = [&](std::size_t t, double weight) {
        if (t == walk.size()) {
            p(states.back(), walk.back()) += weight;
            return;
        }
        for (std::size_t q = 0; q < k; ++q) {
            double next = 0.0;
            if (t == 0) {
                next = w.alpha(q, static_cast<std::size_t>(g.label(walk[0]) - 1));
            } else {
                next = weight * w.mu(q, states[t - 1]);
            }
            states[t] = q;
            assign(t + 1, next);
        }
    };
    std::function<void()> extend = [&] {
        states.assign(walk.size(), 0);
        assign(0, 1.0);
        for (std::size_t u = 0; u < n; ++u) {
            if (g.has_edge(walk.back(), u)) {
                walk.push_back(u);
                extend();
                walk.pop_back();
            }
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        walk = {v};
        extend();
    }
    return p;
}

// beta * sum_{i < terms} (1 - beta)^i W^i.
inline DenseMatrix ppr_series(const DenseMatrix& w, double beta, int terms)
{
    const std::size_t n = w.rows();
    DenseMatrix power = DenseMatrix::identity(n);
    DenseMatrix sum(n, n);
    double c = beta;
    for (int i = 0; i < terms; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                sum(a, b) += c * power(a, b);
            }
        }
        DenseMatrix next(n, n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t m = 0; m < n; ++m) {
                for (std::size_t b = 0; b < n; ++b) {
                    next(a, b) += power(a, m) * w(m, b);
                }
            }
        }
        power = next;
        c *= 1.0 - beta;
    }
    return sum;
}

struct FdGradient {
    DenseMatrix d_mu;
    DenseMatrix d_alpha;
};

// Central differences of `loss` in every entry of mu and alpha.
inline FdGradient finite_differences(const Wgwa& w, const std::function<double(const Wgwa&)>& loss,
                                     double h = 1e-5)
{
    FdGradient out{DenseMatrix(w.mu.rows(), w.mu.cols()),
                   DenseMatrix(w.alpha.rows(), w.alpha.cols())};
    for (std::size_t i = 0; i < w.mu.rows(); ++i) {
        for (std::size_t j = 0; j < w.mu.cols(); ++j) {
            Wgwa plus = w;
            Wgwa minus = w;
            plus.mu(i, j) += h;
            minus.mu(i, j) -= h;
            out.d_mu(i, j) = (loss(plus) - loss(minus)) / (2.0 * h);
        }
    }
    for (std::size_t i = 0; i < w.alpha.rows(); ++i) {
        for (std::size_t j = 0; j < w.alpha.cols(); ++j) {
            Wgwa plus = w;
            Wgwa minus = w;
            plus.alpha(i, j) += h;
            minus.alpha(i, j) -= h;
            out.d_alpha(i, j) = (loss(plus) - loss(minus)) / (2.0 * h);
        }
    }
    return out;
}

// Max over entries of |a - b| / max(scale, |b|), with scale set by the largest |b|.
inline double relative_error(const DenseMatrix& a, const DenseMatrix& b)
{
    const double scale = std::max(b.max_abs(), 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
        }
    }
    return worst;
}

// Naive triple loop, for checking matmul.
inline DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < a.cols(); ++m) {
                s += a(i, m) * b(m, j);
            }
            c(i, j) = s;
        }
    }
    return c;
}

}  // namespace oracle
