#include <doctest.h>

#include <random>

#include "gape/errors.hpp"
#include "gape/matrix.hpp"
#include "gape/numerics.hpp"
#include "oracles.hpp"

using namespace gape;

TEST_CASE("dense matrix basics")
{
    const DenseMatrix m{{1, 2, 3}, {4, 5, 6}};
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6);
    CHECK(m.transposed()(2, 1) == 6);
    CHECK(m.column(1) == Vector{2, 5});
    CHECK(m.block(0, 1, 2, 2) == DenseMatrix{{2, 3}, {5, 6}});
    CHECK(m.max_abs() == 6);
    CHECK(m.frobenius() == doctest::Approx(std::sqrt(91.0)));
    CHECK(DenseMatrix::identity(3).trace() == 3);
}

TEST_CASE("ragged initializer and mismatched shapes are rejected")
{
    CHECK_THROWS_AS((DenseMatrix{{1, 2}, {3}}), InvalidArgument);
    DenseMatrix a(2, 2);
    CHECK_THROWS_AS(a += DenseMatrix(3, 2), InvalidArgument);
    CHECK_THROWS_AS(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("matmul agrees with the naive product, including sparse left operands")
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        DenseMatrix a = random_gaussian(5 + t, 7, rng);
        const DenseMatrix b = random_gaussian(7, 4 + t, rng);
        for (std::size_t i = 0; i < a.rows(); i += 2) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                a(i, j) = 0.0;
            }
        }
        CHECK(max_abs_diff(matmul(a, b), oracle::naive_product(a, b)) < 1e-12);
    }
}

TEST_CASE("hadamard and asymmetry")
{
    const DenseMatrix a{{1, 2}, {3, 4}};
    CHECK(hadamard(a, a) == DenseMatrix{{1, 4}, {9, 16}});
    CHECK(asymmetry(a) == 1.0);
    CHECK(asymmetry(a + a.transposed()) == 0.0);
}
