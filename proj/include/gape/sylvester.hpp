#pragma once

#include <string_view>

#include "gape/matrix.hpp"
#include "gape/numerics.hpp"

namespace gape {

// Solvers for the Stein-type fixed point  P = mu P A + C,
// mu: k x k, A: n x n, C and P: k x n.

enum class SolveMethod { kronecker, fixed_point, schur };
enum class SolveStrategy { automatic, kronecker, fixed_point, schur };

std::string_view to_string(SolveMethod m) noexcept;
std::string_view to_string(SolveStrategy s) noexcept;
/// Accepts "auto", "kronecker", "fixed-point"/"fixed_point", "schur".
SolveStrategy parse_strategy(std::string_view s);

struct SolveReport {
    SolveMethod method = SolveMethod::kronecker;
    /// ||P - mu P A - C||_max
    double residual = 0.0;
    /// 0 for the direct methods.
    int iterations = 0;
    /// rho(mu) * rho(A), which equals rho(A^T kron mu).
    double rho_product = 0.0;
};

struct SolveResult {
    DenseMatrix p;
    SolveReport report;
};

/// k * n above this is rejected by the Kronecker oracle.
inline constexpr std::size_t kKroneckerMaxSize = 10000;
/// `automatic` picks the Kronecker oracle up to this k * n, Schur beyond.
inline constexpr std::size_t kAutoKroneckerLimit = 2500;

double stein_residual(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                      const DenseMatrix& p);

/// Dense solve of (I - A^T kron mu) vec P = vec C. The reference oracle.
SolveResult solve_kronecker(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                            const Tolerances& tol = default_tolerances());

/// P_{t+1} = mu P_t A + C from P_0 = C until ||P_{t+1} - P_t||_max <= step_tol.
/// Requires rho(mu) * rho(A) < 1 - margin, checked before iterating.
SolveResult solve_fixed_point(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              double step_tol, int max_iter,
                              const Tolerances& tol = default_tolerances());
SolveResult solve_fixed_point(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              const Tolerances& tol = default_tolerances());

/// Bartels-Stewart style direct solve in real Schur coordinates.
SolveResult solve_schur(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                        const Tolerances& tol = default_tolerances());

SolveResult solve_gape_system(const DenseMatrix& mu, const DenseMatrix& a, const DenseMatrix& c,
                              SolveStrategy strategy,
                              const Tolerances& tol = default_tolerances());

/// Solves X = T1 X T2 + C with T1 (k x k) and T2 (n x n) upper quasi-triangular.
/// Row blocks of T1 are processed bottom-to-top, column blocks of T2 left-to-right;
/// each block step is a dense system of order at most 4.
DenseMatrix solve_quasi_triangular_stein(const DenseMatrix& t1, const DenseMatrix& t2,
                                         const DenseMatrix& c);

/// Schur factorizations of mu and A kept around so that many right-hand sides,
/// and the adjoint equation X = mu^T X A^T + G, can be solved in O(k^2 n + k n^2).
class SteinSchurSolver {
public:
    SteinSchurSolver(const DenseMatrix& mu, const DenseMatrix& a,
                     const Tolerances& tol = default_tolerances());
    /// Takes both factorizations; lets callers reuse the Schur form of A across solves.
    SteinSchurSolver(SchurDecomposition mu_schur, SchurDecomposition a_schur);

    DenseMatrix solve(const DenseMatrix& c) const;
    DenseMatrix solve_adjoint(const DenseMatrix& g) const;

    double rho_mu() const noexcept { return rho_mu_; }
    double rho_a() const noexcept { return rho_a_; }

private:
    void prepare();

    SchurDecomposition mu_;
    SchurDecomposition a_;
    DenseMatrix mu_t_flipped_;
    DenseMatrix a_t_flipped_;
    double rho_mu_ = 0.0;
    double rho_a_ = 0.0;
};

/// Largest eigenvalue modulus read from a Schur form.
double schur_spectral_radius(const SchurDecomposition& s);

}  // namespace gape
