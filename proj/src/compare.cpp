#include "gape/compare.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gape/baseline.hpp"
#include "gape/errors.hpp"

namespace gape {

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.empty()) {
        throw InvalidArgument("pearson: inputs must be non-empty and of equal length");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / std::sqrt(sxx * syy);
}

Comparison compare_encodings(const EncodingMatrix& a, const EncodingMatrix& b, bool normalize)
{
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
        throw InvalidArgument("compare: shapes differ (" + std::to_string(a.values.rows()) + "x" +
                              std::to_string(a.values.cols()) + " vs " +
                              std::to_string(b.values.rows()) + "x" +
                              std::to_string(b.values.cols()) + ")");
    }
    const DenseMatrix x = normalize ? minmax_normalize(a).values : a.values;
    const DenseMatrix y = normalize ? minmax_normalize(b).values : b.values;

    Comparison c;
    c.max_abs_diff = max_abs_diff(x, y);
    double sq = 0.0;
    auto xd = x.data();
    auto yd = y.data();
    for (std::size_t i = 0; i < xd.size(); ++i) {
        sq += (xd[i] - yd[i]) * (xd[i] - yd[i]);
    }
    c.mse = xd.empty() ? 0.0 : sq / static_cast<double>(xd.size());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const Vector cx = x.column(j);
        const Vector cy = y.column(j);
        c.column_pearson.push_back(pearson(cx, cy));
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        c.node_pearson.push_back(pearson(x.row(i), y.row(i)));
    }
    return c;
}

}  // namespace gape
