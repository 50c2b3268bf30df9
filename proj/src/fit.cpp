#include "gape/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gape/numerics.hpp"

namespace gape {

namespace {

void check_target(const LabeledGraph& g, std::size_t states, const EncodingMatrix& target)
{
    if (target.values.rows() != g.node_count() || target.values.cols() != states) {
        std::ostringstream os;
        os << "target is " << target.values.rows() << "x" << target.values.cols()
           << " but the encoding is " << g.node_count() << "x" << states;
        throw InvalidArgument(os.str());
    }
}

struct Residual {
    double loss;
    DenseMatrix grad_p;  // dloss/dP, k x n
};

// Loss and dloss/dP for states P (k x n) with final weights F = tau l (k x n).
Residual mse_and_grad(const DenseMatrix& p, const DenseMatrix& final_weights,
                      const DenseMatrix& target)
{
    const std::size_t k = p.rows();
    const std::size_t n = p.cols();
    const double scale = 1.0 / static_cast<double>(n * k);
    Residual r{0.0, DenseMatrix(k, n)};
    for (std::size_t q = 0; q < k; ++q) {
        for (std::size_t v = 0; v < n; ++v) {
            const double diff = p(q, v) * final_weights(q, v) - target(v, q);
            r.loss += diff * diff;
            r.grad_p(q, v) = 2.0 * scale * diff * final_weights(q, v);
        }
    }
    r.loss *= scale;
    return r;
}

GapeGradient assemble(const Residual& r, const DenseMatrix& adjoint, const DenseMatrix& p,
                      const DenseMatrix& a, const DenseMatrix& labels)
{
    GapeGradient g;
    g.loss = r.loss;
    g.d_alpha = matmul(adjoint, labels.transposed());
    g.d_mu = matmul(adjoint, matmul(p, a).transposed());
    return g;
}

}  // namespace

void FitConfig::validate() const
{
    if (epochs < 1) {
        throw InvalidArgument("fit: epochs must be at least 1");
    }
    if (steps_per_epoch < 1) {
        throw InvalidArgument("fit: steps per epoch must be at least 1");
    }
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw InvalidArgument("fit: learning rate must be positive");
    }
    if (!(init_contraction > 0.0 && init_contraction < 1.0)) {
        throw InvalidArgument("fit: initial contraction must lie in (0, 1)");
    }
    if (!(projection_margin > 0.0 && projection_margin < 1.0)) {
        throw InvalidArgument("fit: projection margin must lie in (0, 1)");
    }
}

double gape_loss(const Wgwa& w, const LabeledGraph& g, const EncodingMatrix& target,
                 SolveStrategy strategy)
{
    check_target(g, w.states(), target);
    const auto [enc, report] = encode_gape(g, w, strategy);
    double s = 0.0;
    auto ed = enc.values.data();
    auto td = target.values.data();
    for (std::size_t i = 0; i < ed.size(); ++i) {
        s += (ed[i] - td[i]) * (ed[i] - td[i]);
    }
    return s / static_cast<double>(ed.size());
}

GapeGradient gape_grad(const Wgwa& w, const LabeledGraph& g, const EncodingMatrix& target,
                       SolveStrategy strategy)
{
    check_target(g, w.states(), target);
    const DenseMatrix labels = label_matrix(g, static_cast<int>(w.labels()));
    const DenseMatrix& a = g.adjacency();
    const SolveResult forward = gape_states(w, a, labels, strategy);
    const Residual r = mse_and_grad(forward.p, matmul(w.tau, labels), target.values);
    const SolveResult adjoint =
        solve_gape_system(w.mu.transposed(), a.transposed(), r.grad_p, strategy);
    return assemble(r, adjoint.p, forward.p, a, labels);
}

FitResult fit_to_target(const LabeledGraph& g, const EncodingMatrix& target, const FitConfig& cfg)
{
    cfg.validate();
    const std::size_t k = target.values.cols();
    const std::size_t m = static_cast<std::size_t>(g.max_label());
    check_target(g, k, target);

    const DenseMatrix& a = g.adjacency();
    const DenseMatrix labels = label_matrix(g, static_cast<int>(m));
    const bool use_schur = cfg.solver_strategy == SolveStrategy::schur;
    const SchurDecomposition a_schur = use_schur ? real_schur(a) : SchurDecomposition{};
    const double rho_a = use_schur ? schur_spectral_radius(a_schur) : spectral_radius(a);

    const double gamma = rho_a > 0.0 ? cfg.init_contraction / rho_a : cfg.init_contraction;
    FitResult result;
    result.fitted = init_damped(k, m, gamma, cfg.seed);
    Wgwa& w = result.fitted;
    const DenseMatrix final_weights = matmul(w.tau, labels);

    SchurDecomposition mu_schur;
    auto refresh_and_project = [&] {
        double rho_mu = 0.0;
        if (use_schur) {
            mu_schur = real_schur(w.mu);
            rho_mu = schur_spectral_radius(mu_schur);
        } else {
            rho_mu = spectral_radius(w.mu);
        }
        double rho = rho_mu * rho_a;
        if (rho >= 1.0 - cfg.projection_margin) {
            const double s = (1.0 - cfg.projection_margin) / rho;
            w.mu *= s;
            if (use_schur) {
                mu_schur.t *= s;
            }
            rho *= s;
        }
        result.max_rho_product = std::max(result.max_rho_product, rho);
    };

    auto gradient = [&]() -> GapeGradient {
        if (!use_schur) {
            return gape_grad(w, g, target, cfg.solver_strategy);
        }
        const SteinSchurSolver solver(mu_schur, a_schur);
        const DenseMatrix p = solver.solve(matmul(w.alpha, labels));
        const Residual r = mse_and_grad(p, final_weights, target.values);
        return assemble(r, solver.solve_adjoint(r.grad_p), p, a, labels);
    };

    refresh_and_project();
    const int total = cfg.epochs * cfg.steps_per_epoch;
    for (int step = 0; step <= total; ++step) {
        GapeGradient grad = gradient();
        if (!std::isfinite(grad.loss) || grad.loss > cfg.divergence_limit) {
            std::ostringstream os;
            os << "fit diverged at step " << step << " (loss " << grad.loss << ")";
            throw FitDiverged(os.str(), result.mse_trace);
        }
        const bool epoch_end = step > 0 && step % cfg.steps_per_epoch == 0;
        if (step == 0) {
            result.initial_mse = grad.loss;
        }
        if (epoch_end) {
            result.mse_trace.push_back(grad.loss);
        }
        result.final_mse = grad.loss;
        if (step == total || grad.loss <= cfg.target_tol) {
            if (!epoch_end) {
                result.mse_trace.push_back(grad.loss);
            }
            break;
        }
        grad.d_mu *= cfg.lr;
        grad.d_alpha *= cfg.lr;
        w.mu -= grad.d_mu;
        w.alpha -= grad.d_alpha;
        refresh_and_project();
        result.steps = step + 1;
    }
    return result;
}

DenseMatrix init_target_diff(const Wgwa& w, const EncodingMatrix& target)
{
    if (w.alpha.rows() != target.values.cols() || w.alpha.cols() != target.values.rows()) {
        std::ostringstream os;
        os << "init_target_diff: alpha is " << w.alpha.rows() << "x" << w.alpha.cols()
           << " but the transposed target is " << target.values.cols() << "x"
           << target.values.rows();
        throw InvalidArgument(os.str());
    }
    DenseMatrix d = w.alpha - target.values.transposed();
    for (double& x : d.data()) {
        x = std::abs(x);
    }
    return d;
}

}  // namespace gape
