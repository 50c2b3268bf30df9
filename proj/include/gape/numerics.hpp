#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "gape/matrix.hpp"

namespace gape {

/// Every numerical threshold the library uses, in one place.
struct Tolerances {
    /// eig_symmetric rejects inputs with max |m_ij - m_ji| above this.
    double symmetry = 1e-10;
    /// Jacobi stops once the off-diagonal Frobenius norm is below this times ||m||_F.
    double jacobi_off_diagonal = 1e-12;
    int jacobi_max_sweeps = 100;
    /// Francis QR deflates when |t_{i,i-1}| <= this * (|t_ii| + |t_{i-1,i-1}|).
    double schur_deflation = 1e-12;
    /// Eigenvalues at or below this magnitude count as zero (Laplacian kernel).
    double zero_eigenvalue = 1e-8;
    /// The Stein fixed point is accepted as well posed when rho(mu) * rho(A) < 1 - margin.
    double well_posed_margin = 1e-6;
    double fixed_point_tol = 1e-10;
    int fixed_point_max_iter = 10000;
    /// Accepted solves satisfy ||P - mu P A - C||_max <= this * max(1, ||C||_max).
    double residual_bound = 1e-6;
    double spectral_radius_tol = 1e-10;
    int spectral_radius_max_iter = 500;
};

const Tolerances& default_tolerances() noexcept;

/// Symmetric eigendecomposition, eigenvalues ascending, column j of `vectors` paired with values[j].
struct EigenDecomposition {
    Vector values;
    DenseMatrix vectors;
};

/// Orthogonal Q and quasi-upper-triangular T with M = Q T Q^T.
struct SchurDecomposition {
    DenseMatrix q;
    DenseMatrix t;
};

/// Cyclic Jacobi rotations. Eigenvector signs are canonical: the first
/// component with magnitude above 1e-10 is positive.
EigenDecomposition eig_symmetric(const DenseMatrix& m, const Tolerances& tol = default_tolerances());

/// Householder reduction to Hessenberg form followed by Francis double-shift QR.
/// Real eigenvalue pairs are split by a Givens rotation, so the 2x2 diagonal
/// blocks that remain carry complex-conjugate pairs. `max_iter` caps the total
/// number of QR sweeps; 0 selects 40 * n.
SchurDecomposition real_schur(const DenseMatrix& m, int max_iter = 0,
                              const Tolerances& tol = default_tolerances());

/// Eigenvalues read off the diagonal blocks of a quasi-triangular matrix.
std::vector<std::complex<double>> quasi_triangular_eigenvalues(const DenseMatrix& t);

/// Sizes (1 or 2) of the diagonal blocks of a quasi-triangular matrix, top to bottom.
std::vector<std::size_t> diagonal_block_sizes(const DenseMatrix& t);

/// Largest eigenvalue modulus. Power iteration with a fixed random start; the
/// estimate is accepted only when ||M^2 x - r^2 x|| is below tolerance, which
/// covers +-r pairs. Otherwise falls back to the real Schur form.
double spectral_radius(const DenseMatrix& m, double tol = 1e-10, int max_iter = 500);

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b);

/// LU factorization with partial pivoting.
class LuFactorization {
public:
    /// Throws NumericalError naming the pivot column when the matrix is
    /// singular to working precision.
    explicit LuFactorization(DenseMatrix a);

    std::size_t size() const noexcept { return lu_.rows(); }
    Vector solve(std::span<const double> b) const;
    /// Solves A X = B column by column.
    DenseMatrix solve(const DenseMatrix& b) const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

Vector solve_dense(const DenseMatrix& a, std::span<const double> b);

DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

/// Haar-distributed orthogonal matrix: Gram-Schmidt (two passes) on a Gaussian
/// matrix with positive R diagonal.
DenseMatrix random_orthogonal(std::size_t n, std::mt19937_64& rng);

}  // namespace gape
