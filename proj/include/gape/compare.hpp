#pragma once

#include <span>
#include <vector>

#include "gape/wgwa.hpp"

namespace gape {

/// Pearson correlation; NaN when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct Comparison {
    double max_abs_diff = 0.0;
    double mse = 0.0;
    /// One entry per column (correlation across nodes).
    std::vector<double> column_pearson;
    /// One entry per node (correlation across columns).
    std::vector<double> node_pearson;
};

/// Entrywise comparison of two encodings of the same graph, optionally after
/// min-max normalizing both. Throws InvalidArgument on shape mismatch.
Comparison compare_encodings(const EncodingMatrix& a, const EncodingMatrix& b, bool normalize);

}  // namespace gape
