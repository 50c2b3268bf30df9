#pragma once

#include <cstddef>

#include "gape/graph.hpp"
#include "gape/matrix.hpp"
#include "gape/sylvester.hpp"
#include "gape/wgwa.hpp"

namespace gape {

inline constexpr double kDefaultPprBeta = 0.15;

/// Transformer sinusoidal encoding. Row p (0-based position), columns 2j, 2j+1 =
/// sin(p w_j), cos(p w_j) with w_j = 10000^{-2j/k}.
EncodingMatrix reference_sinusoidal(std::size_t length, std::size_t k);

/// First k_enc Laplacian eigenvectors (ascending eigenvalue, canonical signs).
EncodingMatrix lape(const LabeledGraph& g, std::size_t k_enc);

/// The n-state automaton with diagonal mu = Lambda^{-1} run on the Laplacian,
/// together with the solution P = V^T it admits.
struct LapeConstruction {
    Wgwa wgwa;
    /// V, i.e. (P o tau l)^T with P = V^T.
    EncodingMatrix encoding;
    /// max |P - mu P L| over the states with nonzero eigenvalue.
    double residual = 0.0;
    /// States whose eigenvalue is numerically zero; their mu entry is 0 and they
    /// are excluded from the residual.
    std::size_t zero_modes = 0;
};

/// Builds and checks the construction. Throws NumericalError when the residual
/// exceeds `max_residual`.
LapeConstruction lape_wgwa_construction(const LabeledGraph& g, double max_residual = 1e-7);

/// Row u = (W_uu, [W^2]_uu, ..., [W^k]_uu) with W = A D^{-1}.
EncodingMatrix rw_encoding(const LabeledGraph& g, std::size_t k_enc);

/// Solves Pi = beta I + (1 - beta) Pi W by a dense solve of Pi (I - (1 - beta) W) = beta I.
DenseMatrix ppr_matrix(const LabeledGraph& g, double beta, const DenseMatrix& walk);
DenseMatrix ppr_matrix(const LabeledGraph& g, double beta = kDefaultPprBeta);

/// Diagonal of the PPR matrix as a single-column encoding.
EncodingMatrix ppr_diag_encoding(const LabeledGraph& g, double beta = kDefaultPprBeta);

/// Row u, column i = diagonal of the PPR matrix computed with W^i, i = 1..k_enc.
EncodingMatrix pprp_encoding(const LabeledGraph& g, double beta, std::size_t k_enc);

/// PPR as GAPE: one k = 1 automaton per source u with alpha = beta e_u^T over
/// per-node labels, mu = 1 - beta, run on W. Row u of the result is pi_u.
EncodingMatrix gape_as_ppr(const LabeledGraph& g, double beta,
                           SolveStrategy strategy = SolveStrategy::automatic);

/// Per-column (x - min) / (max - min); constant columns become 0.
EncodingMatrix minmax_normalize(const EncodingMatrix& e);

}  // namespace gape
