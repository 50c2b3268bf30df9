#include "gape/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gape/errors.hpp"

namespace gape {

namespace {

void check_shapes(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c)
{
    if (!mu.is_square() || !a.is_square() || c.rows() != mu.rows() || c.cols() != a.rows()) {
        std::ostringstream os;
        os << "Stein system: expected mu k x k, A n x n, C k x n; got mu " << mu.rows() << "x"
           << mu.cols() << ", A " << a.rows() << "x" << a.cols() << ", C " << c.rows() << "x"
           << c.cols();
        throw InvalidArgument(os.str());
    }
}

// P A computed as (A^T P^T)^T so that sparse A costs O(k * nnz(A)).
DenseMatrix right_multiply(const DenseMatrix& p, const DenseMatrix& a_transposed)
{
    return matmul(a_transposed, p.transposed()).transposed();
}

void accept_residual(const SolveReport& r, const DenseMatrix& c, const Tolerances& tol,
                     const char* who)
{
    const double bound = tol.residual_bound * std::max(1.0, c.max_abs());
    if (!(r.residual <= bound)) {
        std::ostringstream os;
        os << who << ": residual " << r.residual << " exceeds " << bound
           << " (rho(mu)*rho(A) = " << r.rho_product << ")";
        throw NumericalError(os.str());
    }
}

double rho_product_estimate(const DenseMatrix& mu, const DenseMatrix& a, const Tolerances& tol)
{
    const double ra = spectral_radius(a, tol.spectral_radius_tol, tol.spectral_radius_max_iter);
    if (ra == 0.0) {
        return 0.0;
    }
    return ra * spectral_radius(mu, tol.spectral_radius_tol, tol.spectral_radius_max_iter);
}

// J M^T J: reverses index order of the transpose, turning a lower
// quasi-triangular transpose back into upper quasi-triangular form.
DenseMatrix flip_transpose(const DenseMatrix& m)
{
    const std::size_t n = m.rows();
    DenseMatrix f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f(i, j) = m(n - 1 - j, n - 1 - i);
        }
    }
    return f;
}

// J_k X J_n
DenseMatrix flip_both(const DenseMatrix& x)
{
    DenseMatrix f(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            f(i, j) = x(x.rows() - 1 - i, x.cols() - 1 - j);
        }
    }
    return f;
}

std::vector<std::size_t> block_starts(const std::vector<std::size_t>& sizes)
{
    std::vector<std::size_t> starts;
    std::size_t s = 0;
    for (std::size_t b : sizes) {
        starts.push_back(s);
        s += b;
    }
    return starts;
}

}  // namespace

std::string_view to_string(SolveMethod m) noexcept
{
    switch (m) {
    case SolveMethod::kronecker:
        return "kronecker";
    case SolveMethod::fixed_point:
        return "fixed-point";
    case SolveMethod::schur:
        return "schur";
    }
    return "unknown";
}

std::string_view to_string(SolveStrategy s) noexcept
{
    switch (s) {
    case SolveStrategy::automatic:
        return "auto";
    case SolveStrategy::kronecker:
        return "kronecker";
    case SolveStrategy::fixed_point:
        return "fixed-point";
    case SolveStrategy::schur:
        return "schur";
    }
    return "unknown";
}

SolveStrategy parse_strategy(std::string_view s)
{
    if (s == "auto") {
        return SolveStrategy::automatic;
    }
    if (s == "kronecker") {
        return SolveStrategy::kronecker;
    }
    if (s == "fixed-point" || s == "fixed_point") {
        return SolveStrategy::fixed_point;
    }
    if (s == "schur") {
        return SolveStrategy::schur;
    }
    throw InvalidArgument("unknown solver strategy '" + std::string(s) +
                          "' (expected auto, kronecker, fixed-point or schur)");
}

double stein_residual(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                      const DenseMatrix& p)
{
    check_shapes(mu, a, p);
    DenseMatrix r = p - matmul(mu, right_multiply(p, a.transposed())) - c;
    return r.max_abs();
}

SolveResult solve_kronecker(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                            const Tolerances& tol)
{
    check_shapes(mu, a, c);
    const std::size_t k = mu.rows();
    const std::size_t n = a.rows();
    if (k * n > kKroneckerMaxSize) {
        throw InvalidArgument("solve_kronecker: k*n = " + std::to_string(k * n) +
                              " exceeds the oracle limit " + std::to_string(kKroneckerMaxSize));
    }
    SolveReport report;
    report.method = SolveMethod::kronecker;
    report.rho_product = rho_product_estimate(mu, a, tol);

    DenseMatrix system = kronecker(a.transposed(), mu);
    system *= -1.0;
    for (std::size_t i = 0; i < k * n; ++i) {
        system(i, i) += 1.0;
    }
    // Column-major vec: entry (q, v) lives at v * k + q.
    Vector rhs(k * n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t q = 0; q < k; ++q) {
            rhs[v * k + q] = c(q, v);
        }
    }
    Vector x;
    try {
        x = LuFactorization(std::move(system)).solve(rhs);
    } catch (const NumericalError& e) {
        std::ostringstream os;
        os << "solve_kronecker: I - A^T kron mu is singular (rho(mu)*rho(A) = "
           << report.rho_product << "): " << e.what();
        throw NumericalError(os.str());
    }
    DenseMatrix p(k, n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t q = 0; q < k; ++q) {
            p(q, v) = x[v * k + q];
        }
    }
    report.residual = stein_residual(mu, a, c, p);
    accept_residual(report, c, tol, "solve_kronecker");
    return {std::move(p), report};
}

SolveResult solve_fixed_point(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              const Tolerances& tol)
{
    return solve_fixed_point(mu, a, c, tol.fixed_point_tol, tol.fixed_point_max_iter, tol);
}

SolveResult solve_fixed_point(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              double step_tol, int max_iter, const Tolerances& tol)
{
    check_shapes(mu, a, c);
    SolveReport report;
    report.method = SolveMethod::fixed_point;
    report.rho_product = rho_product_estimate(mu, a, tol);
    if (!(report.rho_product < 1.0 - tol.well_posed_margin)) {
        std::ostringstream os;
        os << "solve_fixed_point: rho(mu)*rho(A) = " << report.rho_product
           << " is not below 1; the iteration is not a contraction";
        throw NumericalError(os.str());
    }
    const DenseMatrix at = a.transposed();
    DenseMatrix p = c;
    double delta = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        DenseMatrix next = matmul(mu, right_multiply(p, at));
        next += c;
        delta = max_abs_diff(next, p);
        p = std::move(next);
        if (!std::isfinite(delta)) {
            throw NumericalError("solve_fixed_point: iterate became non-finite at step " +
                                 std::to_string(it));
        }
        if (delta <= step_tol) {
            report.iterations = it;
            report.residual = stein_residual(mu, a, c, p);
            accept_residual(report, c, tol, "solve_fixed_point");
            return {std::move(p), report};
        }
    }
    std::ostringstream os;
    os << "solve_fixed_point: no convergence in " << max_iter << " iterations (last step "
       << delta << ", rho(mu)*rho(A) = " << report.rho_product << ")";
    throw NumericalError(os.str());
}

DenseMatrix solve_quasi_triangular_stein(const DenseMatrix& t1, const DenseMatrix& t2,
                                         const DenseMatrix& c)
{
    const std::size_t k = t1.rows();
    const std::size_t n = t2.rows();
    const auto row_sizes = diagonal_block_sizes(t1);
    const auto col_sizes = diagonal_block_sizes(t2);
    const auto row_starts = block_starts(row_sizes);
    const auto col_starts = block_starts(col_sizes);

    DenseMatrix x(k, n);
    // y(:, J) = sum_{q <= J} X(:, q) T2(q, J), completed one column block at a time.
    DenseMatrix y(k, n);

    for (std::size_t jb = 0; jb < col_sizes.size(); ++jb) {
        const std::size_t j0 = col_starts[jb];
        const std::size_t sj = col_sizes[jb];
        // Contribution of column blocks already solved.
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t jj = 0; jj < sj; ++jj) {
                double s = 0.0;
                for (std::size_t q = 0; q < j0; ++q) {
                    s += x(i, q) * t2(q, j0 + jj);
                }
                y(i, j0 + jj) = s;
            }
        }
        for (std::size_t ib = row_sizes.size(); ib-- > 0;) {
            const std::size_t i0 = row_starts[ib];
            const std::size_t si = row_sizes[ib];
            // rhs = C(I,J) + T1(I,I) y'(I,J) + sum_{p > I} T1(I,p) y(p,J)
            double rhs[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
            for (std::size_t ii = 0; ii < si; ++ii) {
                for (std::size_t jj = 0; jj < sj; ++jj) {
                    double s = c(i0 + ii, j0 + jj);
                    for (std::size_t p = i0; p < k; ++p) {
                        s += t1(i0 + ii, p) * y(p, j0 + jj);
                    }
                    rhs[ii][jj] = s;
                }
            }
            // (I - T2(J,J)^T kron T1(I,I)) vec X(I,J) = vec rhs, column-major vec.
            const std::size_t dim = si * sj;
            DenseMatrix sys(dim, dim);
            Vector b(dim);
            for (std::size_t jj = 0; jj < sj; ++jj) {
                for (std::size_t ii = 0; ii < si; ++ii) {
                    const std::size_t row = jj * si + ii;
                    b[row] = rhs[ii][jj];
                    for (std::size_t ll = 0; ll < sj; ++ll) {
                        for (std::size_t pp = 0; pp < si; ++pp) {
                            const std::size_t col = ll * si + pp;
                            sys(row, col) = (row == col ? 1.0 : 0.0) -
                                            t2(j0 + ll, j0 + jj) * t1(i0 + ii, i0 + pp);
                        }
                    }
                }
            }
            Vector sol;
            try {
                sol = LuFactorization(std::move(sys)).solve(b);
            } catch (const NumericalError&) {
                throw NumericalError("Schur solve: singular block system at block (" +
                                     std::to_string(ib + 1) + "," + std::to_string(jb + 1) +
                                     "), rows " + std::to_string(i0 + 1) + ", columns " +
                                     std::to_string(j0 + 1));
            }
            for (std::size_t jj = 0; jj < sj; ++jj) {
                for (std::size_t ii = 0; ii < si; ++ii) {
                    x(i0 + ii, j0 + jj) = sol[jj * si + ii];
                }
            }
            // Complete y(I, J) now that X(I, J) is known.
            for (std::size_t ii = 0; ii < si; ++ii) {
                for (std::size_t jj = 0; jj < sj; ++jj) {
                    double s = 0.0;
                    for (std::size_t ll = 0; ll < sj; ++ll) {
                        s += x(i0 + ii, j0 + ll) * t2(j0 + ll, j0 + jj);
                    }
                    y(i0 + ii, j0 + jj) += s;
                }
            }
        }
    }
    return x;
}

double schur_spectral_radius(const SchurDecomposition& s)
{
    double rho = 0.0;
    for (const auto& ev : quasi_triangular_eigenvalues(s.t)) {
        rho = std::max(rho, std::abs(ev));
    }
    return rho;
}

SteinSchurSolver::SteinSchurSolver(const DenseMatrix& mu, const DenseMatrix& a,
                                   const Tolerances& tol)
    : mu_(real_schur(mu, 0, tol)), a_(real_schur(a, 0, tol))
{
    prepare();
}

SteinSchurSolver::SteinSchurSolver(SchurDecomposition mu_schur, SchurDecomposition a_schur)
    : mu_(std::move(mu_schur)), a_(std::move(a_schur))
{
    prepare();
}

void SteinSchurSolver::prepare()
{
    mu_t_flipped_ = flip_transpose(mu_.t);
    a_t_flipped_ = flip_transpose(a_.t);
    rho_mu_ = schur_spectral_radius(mu_);
    rho_a_ = schur_spectral_radius(a_);
}

DenseMatrix SteinSchurSolver::solve(const DenseMatrix& c) const
{
    // mu = U T1 U^T, A = V T2 V^T, X = U^T P V.
    const DenseMatrix ct = matmul(mu_.q.transposed(), matmul(c, a_.q));
    const DenseMatrix x = solve_quasi_triangular_stein(mu_.t, a_.t, ct);
    return matmul(mu_.q, matmul(x, a_.q.transposed()));
}

DenseMatrix SteinSchurSolver::solve_adjoint(const DenseMatrix& g) const
{
    // X = mu^T X A^T + G  becomes  Z = (J T1^T J) Z (J T2^T J) + J G~ J  with Z = J (U^T X V) J.
    const DenseMatrix gt = flip_both(matmul(mu_.q.transposed(), matmul(g, a_.q)));
    const DenseMatrix z = solve_quasi_triangular_stein(mu_t_flipped_, a_t_flipped_, gt);
    return matmul(mu_.q, matmul(flip_both(z), a_.q.transposed()));
}

SolveResult solve_schur(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                        const Tolerances& tol)
{
    check_shapes(mu, a, c);
    const SteinSchurSolver solver(mu, a, tol);
    SolveReport report;
    report.method = SolveMethod::schur;
    report.rho_product = solver.rho_mu() * solver.rho_a();
    DenseMatrix p = solver.solve(c);
    if (!p.all_finite()) {
        throw NumericalError("solve_schur: solution is not finite (rho(mu)*rho(A) = " +
                             std::to_string(report.rho_product) + ")");
    }
    report.residual = stein_residual(mu, a, c, p);
    accept_residual(report, c, tol, "solve_schur");
    return {std::move(p), report};
}

SolveResult solve_gape_system(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              SolveStrategy strategy, const Tolerances& tol)
{
    check_shapes(mu, a, c);
    switch (strategy) {
    case SolveStrategy::kronecker:
        return solve_kronecker(mu, a, c, tol);
    case SolveStrategy::fixed_point:
        return solve_fixed_point(mu, a, c, tol);
    case SolveStrategy::schur:
        return solve_schur(mu, a, c, tol);
    case SolveStrategy::automatic:
        break;
    }
    if (mu.rows() * a.rows() <= kAutoKroneckerLimit) {
        return solve_kronecker(mu, a, c, tol);
    }
    std::string schur_error;
    try {
        return solve_schur(mu, a, c, tol);
    } catch (const NumericalError& e) {
        schur_error = e.what();
    }
    try {
        return solve_fixed_point(mu, a, c, tol);
    } catch (const NumericalError& e) {
        throw NumericalError("all strategies failed: [schur] " + schur_error +
                             "; [fixed-point] " + e.what());
    }
}

}  // namespace gape
