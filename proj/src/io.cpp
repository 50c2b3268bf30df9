#include "gape/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gape/errors.hpp"

namespace gape {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& field, std::size_t line_no)
{
    std::size_t b = field.find_first_not_of(" \t");
    std::size_t e = field.find_last_not_of(" \t");
    if (b == std::string::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": empty field");
    }
    const char* first = field.data() + b;
    const char* last = field.data() + e + 1;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
    return x;
}

DenseMatrix parse_rows(std::istringstream& in, std::size_t skip_cols, std::size_t line_no)
{
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() <= skip_cols) {
            throw ParseError("line " + std::to_string(line_no) + ": no values");
        }
        const std::size_t c = fields.size() - skip_cols;
        if (rows == 0) {
            cols = c;
        } else if (c != cols) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cols) + " values, got " + std::to_string(c));
        }
        for (std::size_t j = skip_cols; j < fields.size(); ++j) {
            values.push_back(parse_number(fields[j], line_no));
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(values));
}

json meta_fields(const EncodingMeta& m)
{
    json j = json::object();
    if (m.gamma) {
        j["gamma"] = *m.gamma;
    }
    if (m.beta) {
        j["beta"] = *m.beta;
    }
    if (m.k_enc) {
        j["k_enc"] = *m.k_enc;
    }
    if (m.seed) {
        j["seed"] = *m.seed;
    }
    if (m.solver) {
        j["solver"] = std::string(to_string(*m.solver));
    }
    return j;
}

}  // namespace

std::string graph_to_json(const LabeledGraph& g)
{
    json j;
    j["n"] = g.node_count();
    j["directed"] = g.directed();
    j["labels"] = g.labels();
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) {
        edges.push_back({u + 1, v + 1});
    }
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

LabeledGraph graph_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    try {
        const std::size_t n = j.at("n").get<std::size_t>();
        const bool directed = j.value("directed", false);
        std::vector<int> labels;
        if (j.contains("labels")) {
            labels = j.at("labels").get<std::vector<int>>();
            if (labels.size() != n) {
                throw ParseError("graph JSON: " + std::to_string(labels.size()) +
                                 " labels for " + std::to_string(n) + " nodes");
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : j.at("edges")) {
            const auto pair = e.get<std::vector<long long>>();
            if (pair.size() != 2) {
                throw ParseError("graph JSON: edge must have two endpoints");
            }
            for (long long x : pair) {
                if (x < 1 || static_cast<std::size_t>(x) > n) {
                    throw ParseError("graph JSON: endpoint " + std::to_string(x) +
                                     " outside 1.." + std::to_string(n));
                }
            }
            edges.emplace_back(static_cast<std::size_t>(pair[0] - 1),
                               static_cast<std::size_t>(pair[1] - 1));
        }
        return LabeledGraph::from_edges(n, edges, directed, labels);
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
}

LabeledGraph read_graph(const std::filesystem::path& path)
{
    return graph_from_json(read_text(path));
}

void write_graph(const LabeledGraph& g, const std::filesystem::path& path)
{
    write_text(path, graph_to_json(g));
}

std::string format_number(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        throw Error("format_number: conversion failed");
    }
    return std::string(buf, ptr);
}

std::string encoding_to_csv(const DenseMatrix& values)
{
    std::string out = "node";
    for (std::size_t j = 0; j < values.cols(); ++j) {
        out += ",dim_" + std::to_string(j + 1);
    }
    out += '\n';
    for (std::size_t i = 0; i < values.rows(); ++i) {
        out += std::to_string(i + 1);
        for (std::size_t j = 0; j < values.cols(); ++j) {
            out += ',';
            out += format_number(values(i, j));
        }
        out += '\n';
    }
    return out;
}

DenseMatrix encoding_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("node", 0) != 0) {
        throw ParseError("encoding CSV: missing 'node,dim_1,...' header");
    }
    const std::size_t header_cols = split(header, ',').size() - 1;
    DenseMatrix m = parse_rows(in, 1, 1);
    if (m.rows() > 0 && m.cols() != header_cols) {
        throw ParseError("encoding CSV: header names " + std::to_string(header_cols) +
                         " columns but rows have " + std::to_string(m.cols()));
    }
    return m;
}

std::string matrix_to_csv(const DenseMatrix& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_number(m(i, j));
        }
        out += '\n';
    }
    return out;
}

DenseMatrix matrix_from_csv(const std::string& text)
{
    std::istringstream in(text);
    return parse_rows(in, 0, 0);
}

std::string meta_to_json(const EncodingMatrix& e, const SolveReport* report)
{
    json j;
    j["scheme"] = std::string(to_string(e.scheme));
    j["nodes"] = e.nodes();
    j["dims"] = e.dims();
    j["params"] = meta_fields(e.meta);
    if (report != nullptr) {
        j["solve_report"] = {{"method", std::string(to_string(report->method))},
                             {"residual", report->residual},
                             {"iterations", report->iterations},
                             {"rho_product", report->rho_product}};
    }
    return j.dump(2) + "\n";
}

std::string fit_result_to_json(const FitResult& r, const FitConfig& cfg)
{
    json j;
    j["final_mse"] = r.final_mse;
    j["initial_mse"] = r.initial_mse;
    j["mse_trace"] = r.mse_trace;
    j["steps"] = r.steps;
    j["max_rho_product"] = r.max_rho_product;
    j["mu_frobenius"] = r.fitted.mu.frobenius();
    j["config"] = {{"epochs", cfg.epochs},
                   {"steps_per_epoch", cfg.steps_per_epoch},
                   {"lr", cfg.lr},
                   {"seed", cfg.seed},
                   {"target_tol", cfg.target_tol},
                   {"solver_strategy", std::string(to_string(cfg.solver_strategy))},
                   {"init_contraction", cfg.init_contraction},
                   {"projection_margin", cfg.projection_margin}};
    return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

}  // namespace gape
