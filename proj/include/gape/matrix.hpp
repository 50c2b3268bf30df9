#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gape {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles. The only numeric container in the library.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }

    Vector column(std::size_t j) const;
    Vector diag() const;

    DenseMatrix transposed() const;

    /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
    DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b);

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& operator*=(double s) noexcept;

    bool operator==(const DenseMatrix& o) const = default;

    double max_abs() const noexcept;
    double frobenius() const noexcept;
    double trace() const;
    bool all_finite() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(DenseMatrix a, double s);
DenseMatrix operator*(double s, DenseMatrix a);

/// Matrix product. Zero entries of the left operand are skipped, so sparse-ish
/// left factors (adjacency matrices, block-diagonal rotations) are cheap.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// Elementwise product.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

/// max_ij |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// max_ij |a_ij - a_ji|.
double asymmetry(const DenseMatrix& a);

double norm_inf(std::span<const double> x) noexcept;
double norm2(std::span<const double> x) noexcept;

}  // namespace gape
