#include "gape/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gape/errors.hpp"

namespace gape {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const DenseMatrix& m, const char* what)
{
    if (!m.is_square()) {
        throw InvalidArgument(std::string(what) + ": matrix must be square, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

// Householder reflector I - beta v v^T mapping x onto a multiple of e1.
// Returns beta = 0 when x is already zero.
template <std::size_t L>
double householder(std::array<double, L>& v)
{
    double norm = 0.0;
    for (double x : v) {
        norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        return 0.0;
    }
    v[0] += std::copysign(norm, v[0]);
    double vv = 0.0;
    for (double x : v) {
        vv += x * x;
    }
    return 2.0 / vv;
}

// Applies (I - beta v v^T) to rows r..r+L-1 of h, columns [c0, c1).
template <std::size_t L>
void reflect_rows(DenseMatrix& h, const std::array<double, L>& v, double beta, std::size_t r,
                  std::size_t c0, std::size_t c1)
{
    for (std::size_t j = c0; j < c1; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            s += v[i] * h(r + i, j);
        }
        s *= beta;
        for (std::size_t i = 0; i < L; ++i) {
            h(r + i, j) -= s * v[i];
        }
    }
}

// Applies (I - beta v v^T) from the right to columns c..c+L-1 of h, rows [r0, r1).
template <std::size_t L>
void reflect_cols(DenseMatrix& h, const std::array<double, L>& v, double beta, std::size_t c,
                  std::size_t r0, std::size_t r1)
{
    for (std::size_t i = r0; i < r1; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < L; ++j) {
            s += h(i, c + j) * v[j];
        }
        s *= beta;
        for (std::size_t j = 0; j < L; ++j) {
            h(i, c + j) -= s * v[j];
        }
    }
}

void hessenberg(DenseMatrix& h, DenseMatrix& q)
{
    const std::size_t n = h.rows();
    std::vector<double> v;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        v.assign(len, 0.0);
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = h(k + 1 + i, k);
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            continue;
        }
        v[0] += std::copysign(norm, v[0]);
        double vv = 0.0;
        for (double x : v) {
            vv += x * x;
        }
        const double beta = 2.0 / vv;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                s += v[i] * h(k + 1 + i, j);
            }
            s *= beta;
            for (std::size_t i = 0; i < len; ++i) {
                h(k + 1 + i, j) -= s * v[i];
            }
        }
        auto apply_right = [&](DenseMatrix& m) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < len; ++j) {
                    s += m(i, k + 1 + j) * v[j];
                }
                s *= beta;
                for (std::size_t j = 0; j < len; ++j) {
                    m(i, k + 1 + j) -= s * v[j];
                }
            }
        };
        apply_right(h);
        apply_right(q);
        for (std::size_t i = k + 2; i < n; ++i) {
            h(i, k) = 0.0;
        }
    }
}

// Splits the 2x2 block at (p, p) into two 1x1 blocks when its eigenvalues are real.
void split_real_block(DenseMatrix& h, DenseMatrix& q, std::size_t p)
{
    const double a = h(p, p);
    const double b = h(p, p + 1);
    const double c = h(p + 1, p);
    const double d = h(p + 1, p + 1);
    if (c == 0.0) {
        return;
    }
    const double half = 0.5 * (a - d);
    const double disc = half * half + b * c;
    if (disc < 0.0) {
        return;
    }
    const double root = std::sqrt(disc);
    const double lambda = d + half + (half >= 0.0 ? root : -root);
    // Eigenvector of the block for lambda; take the better-conditioned of two forms.
    double x1 = lambda - d;
    double y1 = c;
    double x2 = b;
    double y2 = lambda - a;
    double x = x1;
    double y = y1;
    if (std::hypot(x2, y2) > std::hypot(x1, y1)) {
        x = x2;
        y = y2;
    }
    const double r = std::hypot(x, y);
    if (r == 0.0) {
        return;
    }
    const double cs = x / r;
    const double sn = y / r;
    const std::size_t n = h.rows();
    // H <- G^T H G with G = [cs -sn; sn cs].
    for (std::size_t j = 0; j < n; ++j) {
        const double u = h(p, j);
        const double w = h(p + 1, j);
        h(p, j) = cs * u + sn * w;
        h(p + 1, j) = -sn * u + cs * w;
    }
    auto rotate_cols = [&](DenseMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double u = m(i, p);
            const double w = m(i, p + 1);
            m(i, p) = cs * u + sn * w;
            m(i, p + 1) = -sn * u + cs * w;
        }
    };
    rotate_cols(h);
    rotate_cols(q);
    h(p + 1, p) = 0.0;
}

void francis_step(DenseMatrix& h, DenseMatrix& q, std::size_t lo, std::size_t hi, bool exceptional)
{
    const std::size_t n = h.rows();
    double s = h(hi - 1, hi - 1) + h(hi, hi);
    double t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    if (exceptional) {
        const double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
        s = 1.5 * w;
        t = w * w;
    }
    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + t;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
    double z = h(lo + 1, lo) * h(lo + 2, lo + 1);
    for (std::size_t k = lo; k + 2 <= hi; ++k) {
        std::array<double, 3> v{x, y, z};
        const double beta = householder(v);
        if (beta != 0.0) {
            const std::size_t c0 = k > lo ? k - 1 : lo;
            reflect_rows(h, v, beta, k, c0, n);
            reflect_cols(h, v, beta, k, 0, std::min(k + 3, hi) + 1);
            reflect_cols(q, v, beta, k, 0, n);
        }
        if (k > lo) {
            h(k + 1, k - 1) = 0.0;
            h(k + 2, k - 1) = 0.0;
        }
        x = h(k + 1, k);
        y = h(k + 2, k);
        if (k + 3 <= hi) {
            z = h(k + 3, k);
        }
    }
    std::array<double, 2> v{x, y};
    const double beta = householder(v);
    if (beta != 0.0) {
        reflect_rows(h, v, beta, hi - 1, hi - 2, n);
        reflect_cols(h, v, beta, hi - 1, 0, hi + 1);
        reflect_cols(q, v, beta, hi - 1, 0, n);
    }
    if (hi >= lo + 3) {
        h(hi, hi - 2) = 0.0;
    }
}

}  // namespace

const Tolerances& default_tolerances() noexcept
{
    static const Tolerances tol{};
    return tol;
}

EigenDecomposition eig_symmetric(const DenseMatrix& m, const Tolerances& tol)
{
    require_square(m, "eig_symmetric");
    const double asym = asymmetry(m);
    if (asym > tol.symmetry) {
        throw InvalidArgument("eig_symmetric: input is not symmetric (max |m_ij - m_ji| = " +
                              std::to_string(asym) + ")");
    }
    const std::size_t n = m.rows();
    DenseMatrix a = m;
    DenseMatrix v = DenseMatrix::identity(n);
    const double target = tol.jacobi_off_diagonal * m.frobenius();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += 2.0 * a(i, j) * a(i, j);
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < tol.jacobi_max_sweeps; ++sweep) {
        if (off_norm() <= target) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (apr == 0.0) {
                    continue;
                }
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                double t = 0.0;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == r) {
                        continue;
                    }
                    const double akp = a(k, p);
                    const double akr = a(k, r);
                    a(k, p) = a(p, k) = c * akp - s * akr;
                    a(k, r) = a(r, k) = s * akp + c * akr;
                }
                a(p, p) -= t * apr;
                a(r, r) += t * apr;
                a(p, r) = a(r, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkr = v(k, r);
                    v(k, p) = c * vkp - s * vkr;
                    v(k, r) = s * vkp + c * vkr;
                }
            }
        }
    }
    if (sweep == tol.jacobi_max_sweeps && off_norm() > target) {
        throw NumericalError("eig_symmetric: Jacobi did not converge in " +
                             std::to_string(tol.jacobi_max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out{Vector(n), DenseMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);
        double sign = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > 1e-10) {
                sign = v(i, src) < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) = sign * v(i, src);
        }
    }
    return out;
}

SchurDecomposition real_schur(const DenseMatrix& m, int max_iter, const Tolerances& tol)
{
    require_square(m, "real_schur");
    const std::size_t n = m.rows();
    SchurDecomposition out{DenseMatrix::identity(n), m};
    if (n <= 1) {
        return out;
    }
    if (max_iter <= 0) {
        max_iter = static_cast<int>(40 * n);
    }
    DenseMatrix& h = out.t;
    DenseMatrix& q = out.q;
    hessenberg(h, q);

    const double floor = kEps * std::max(h.frobenius(), std::numeric_limits<double>::min());
    int total = 0;
    int since_deflation = 0;
    std::size_t hi = n - 1;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            const double sub = std::abs(h(lo, lo - 1));
            if (sub <= tol.schur_deflation * scale || sub <= floor) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (lo + 1 == hi) {
            split_real_block(h, q, lo);
            hi = lo == 0 ? 0 : lo - 1;
            since_deflation = 0;
            continue;
        }
        if (total >= max_iter) {
            throw NumericalError("real_schur: no convergence after " + std::to_string(total) +
                                 " QR sweeps (active block rows " + std::to_string(lo + 1) +
                                 ".." + std::to_string(hi + 1) + ")");
        }
        ++total;
        ++since_deflation;
        francis_step(h, q, lo, hi, since_deflation % 10 == 0);
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < i; ++j) {
            h(i, j) = 0.0;
        }
    }
    return out;
}

std::vector<std::size_t> diagonal_block_sizes(const DenseMatrix& t)
{
    std::vector<std::size_t> sizes;
    const std::size_t n = t.rows();
    std::size_t i = 0;
    while (i < n) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            sizes.push_back(2);
            i += 2;
        } else {
            sizes.push_back(1);
            i += 1;
        }
    }
    return sizes;
}

std::vector<std::complex<double>> quasi_triangular_eigenvalues(const DenseMatrix& t)
{
    std::vector<std::complex<double>> ev;
    std::size_t i = 0;
    for (std::size_t size : diagonal_block_sizes(t)) {
        if (size == 1) {
            ev.emplace_back(t(i, i), 0.0);
        } else {
            const double a = t(i, i);
            const double b = t(i, i + 1);
            const double c = t(i + 1, i);
            const double d = t(i + 1, i + 1);
            const double half = 0.5 * (a - d);
            const double disc = half * half + b * c;
            const double mid = 0.5 * (a + d);
            if (disc >= 0.0) {
                ev.emplace_back(mid + std::sqrt(disc), 0.0);
                ev.emplace_back(mid - std::sqrt(disc), 0.0);
            } else {
                ev.emplace_back(mid, std::sqrt(-disc));
                ev.emplace_back(mid, -std::sqrt(-disc));
            }
        }
        i += size;
    }
    return ev;
}

double spectral_radius(const DenseMatrix& m, double tol, int max_iter)
{
    require_square(m, "spectral_radius");
    const std::size_t n = m.rows();
    if (n == 0 || m.max_abs() == 0.0) {
        return 0.0;
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x(n);
    for (double& xi : x) {
        xi = normal(rng);
    }
    double nx = norm2(x);
    for (double& xi : x) {
        xi /= nx;
    }

    for (int it = 0; it < max_iter; ++it) {
        Vector y = matvec(m, x);
        const double ny = norm2(y);
        if (ny == 0.0) {
            // A random start annihilated by a power of M: M is nilpotent.
            return 0.0;
        }
        Vector z = matvec(m, y);
        const double nz = norm2(z);
        const double r2 = nz;  // ||M^2 x|| with ||x|| = 1
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = z[i] - r2 * x[i];
            const double e = z[i] + r2 * x[i];
            resid += std::min(d * d, e * e);
        }
        resid = std::sqrt(resid);
        if (resid <= tol * std::max(1.0, r2) * 1e-2) {
            return std::sqrt(r2);
        }
        if (nz == 0.0) {
            return 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = z[i] / nz;
        }
    }

    const SchurDecomposition s = real_schur(m);
    double rho = 0.0;
    for (const auto& ev : quasi_triangular_eigenvalues(s.t)) {
        rho = std::max(rho, std::abs(ev));
    }
    return rho;
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) {
                continue;
            }
            for (std::size_t p = 0; p < b.rows(); ++p) {
                for (std::size_t r = 0; r < b.cols(); ++r) {
                    k(i * b.rows() + p, j * b.cols() + r) = aij * b(p, r);
                }
            }
        }
    }
    return k;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows())
{
    require_square(lu_, "LuFactorization");
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), 0);
    const double scale = lu_.max_abs();
    const double tiny = static_cast<double>(std::max<std::size_t>(n, 1)) * kEps * scale;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                piv = i;
            }
        }
        if (best == 0.0 || best <= tiny) {
            throw NumericalError("LU: matrix is singular to working precision at pivot " +
                                 std::to_string(k + 1) + " of " + std::to_string(n));
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu_(k, j), lu_(piv, j));
            }
            std::swap(perm_[k], perm_[piv]);
        }
        const double pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            if (f == 0.0) {
                continue;
            }
            double* ri = lu_.row(i).data();
            const double* rk = lu_.row(k).data();
            for (std::size_t j = k + 1; j < n; ++j) {
                ri[j] -= f * rk[j];
            }
        }
    }
}

Vector LuFactorization::solve(std::span<const double> b) const
{
    const std::size_t n = lu_.rows();
    if (b.size() != n) {
        throw InvalidArgument("LU solve: right-hand side has length " + std::to_string(b.size()) +
                              ", expected " + std::to_string(n));
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s / lu_(i, i);
    }
    return x;
}

DenseMatrix LuFactorization::solve(const DenseMatrix& b) const
{
    if (b.rows() != lu_.rows()) {
        throw InvalidArgument("LU solve: right-hand side row count mismatch");
    }
    DenseMatrix x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        const Vector col = solve(b.column(j));
        for (std::size_t i = 0; i < b.rows(); ++i) {
            x(i, j) = col[i];
        }
    }
    return x;
}

Vector solve_dense(const DenseMatrix& a, std::span<const double> b)
{
    if (!a.is_square() || a.rows() != b.size()) {
        throw InvalidArgument("solve_dense: system is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " with rhs length " +
                              std::to_string(b.size()));
    }
    return LuFactorization(a).solve(b);
}

DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix m(rows, cols);
    for (double& x : m.data()) {
        x = normal(rng);
    }
    return m;
}

DenseMatrix random_orthogonal(std::size_t n, std::mt19937_64& rng)
{
    DenseMatrix q = random_gaussian(n, n, rng);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < j; ++p) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    dot += q(i, p) * q(i, j);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    q(i, j) -= dot * q(i, p);
                }
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm += q(i, j) * q(i, j);
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw NumericalError("random_orthogonal: degenerate Gaussian draw");
        }
        for (std::size_t i = 0; i < n; ++i) {
            q(i, j) /= norm;
        }
    }
    return q;
}

}  // namespace gape
