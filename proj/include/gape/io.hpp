#pragma once

#include <filesystem>
#include <string>

#include "gape/fit.hpp"
#include "gape/graph.hpp"
#include "gape/sylvester.hpp"
#include "gape/wgwa.hpp"

namespace gape {

// Graph files are JSON: {"n": 3, "directed": false, "labels": [1, 1, 1],
// "edges": [[1, 2], [2, 3]]}. Nodes are 1-indexed; undirected edges appear once.
// "labels" may be omitted, in which case every node gets label 1.

std::string graph_to_json(const LabeledGraph& g);
LabeledGraph graph_from_json(const std::string& text);
LabeledGraph read_graph(const std::filesystem::path& path);
void write_graph(const LabeledGraph& g, const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

/// "node,dim_1,...,dim_k" then one row per node, node numbered from 1.
std::string encoding_to_csv(const DenseMatrix& values);
DenseMatrix encoding_from_csv(const std::string& text);

/// Plain numeric CSV without a header; used for fitted weights.
std::string matrix_to_csv(const DenseMatrix& m);
DenseMatrix matrix_from_csv(const std::string& text);

std::string meta_to_json(const EncodingMatrix& e, const SolveReport* report);

std::string fit_result_to_json(const FitResult& r, const FitConfig& cfg);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gape
