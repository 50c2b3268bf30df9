#pragma once

#include <cstdint>
#include <vector>

#include "gape/errors.hpp"
#include "gape/graph.hpp"
#include "gape/sylvester.hpp"
#include "gape/wgwa.hpp"

namespace gape {

struct FitConfig {
    int epochs = 10;
    /// The training set is `steps_per_epoch` copies of one target, so an epoch is
    /// that many identical full-batch gradient steps.
    int steps_per_epoch = 1000;
    double lr = 1.0;
    std::uint64_t seed = 0;
    /// Stop early once the loss is at or below this.
    double target_tol = 0.0;
    SolveStrategy solver_strategy = SolveStrategy::schur;
    /// Initial damping is chosen so that rho(mu) * rho(A) equals this.
    double init_contraction = 0.5;
    /// After each step mu is rescaled if rho(mu) * rho(A) >= 1 - margin.
    double projection_margin = 1e-3;
    double divergence_limit = 1e6;

    /// Throws InvalidArgument unless epochs >= 1, steps_per_epoch >= 1, lr > 0.
    void validate() const;
};

struct FitResult {
    double initial_mse = 0.0;
    /// Loss after each epoch.
    std::vector<double> mse_trace;
    double final_mse = 0.0;
    Wgwa fitted;
    /// Largest rho(mu) * rho(A) observed after any update.
    double max_rho_product = 0.0;
    int steps = 0;
};

/// Thrown when the loss exceeds the divergence limit; carries the trace so far.
class FitDiverged : public NumericalError {
public:
    FitDiverged(const std::string& what, std::vector<double> trace)
        : NumericalError(what), trace_(std::move(trace))
    {
    }
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Mean over all n * k entries of (GAPE - target)^2.
double gape_loss(const Wgwa& w, const LabeledGraph& g, const EncodingMatrix& target,
                 SolveStrategy strategy = SolveStrategy::automatic);

struct GapeGradient {
    double loss = 0.0;
    DenseMatrix d_mu;
    DenseMatrix d_alpha;
};

/// Exact gradient of gape_loss by implicit differentiation of P = mu P A + alpha l:
/// with G = dloss/dP, the adjoint X = mu^T X A^T + G gives
/// d_alpha = X l^T and d_mu = X (P A)^T.
GapeGradient gape_grad(const Wgwa& w, const LabeledGraph& g, const EncodingMatrix& target,
                       SolveStrategy strategy = SolveStrategy::automatic);

/// Plain gradient descent on (mu, alpha) from init_damped, with a spectral
/// projection on mu after every step. tau stays fixed at ones.
FitResult fit_to_target(const LabeledGraph& g, const EncodingMatrix& target, const FitConfig& cfg);

/// |alpha - target^T| entrywise; needs alpha to be k x n for an n x k target.
DenseMatrix init_target_diff(const Wgwa& w, const EncodingMatrix& target);

}  // namespace gape
