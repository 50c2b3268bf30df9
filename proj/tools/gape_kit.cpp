// gape-kit: generate graphs, compute and compare encodings, fit, verify.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gape/baseline.hpp"
#include "gape/compare.hpp"
#include "gape/errors.hpp"
#include "gape/fit.hpp"
#include "gape/graph.hpp"
#include "gape/io.hpp"
#include "gape/verify.hpp"
#include "gape/wgwa.hpp"

#ifndef GAPE_FIXTURE_DIR
#define GAPE_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace gape;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("GAPE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("GAPE_SEED is not an integer: ") + env);
        }
    }
    return 0;
}

void emit(const std::optional<std::string>& out, const std::string& text,
          std::vector<std::string>& artifacts)
{
    if (out) {
        write_text(*out, text);
        artifacts.push_back(*out);
    } else {
        std::cout << text;
    }
}

fs::path sibling(const fs::path& p, const std::string& suffix)
{
    fs::path s = p;
    s.replace_extension();
    s += suffix;
    return s;
}

struct GenerateArgs {
    std::string family;
    std::size_t n = 0;
    double p = 0.5;
    std::size_t skip = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

int cmd_generate(const GenerateArgs& a)
{
    auto build = [&]() -> LabeledGraph {
        if (a.family == "path") {
            return string_graph(a.n);
        }
        if (a.family == "cycle") {
            return cycle_graph(a.n);
        }
        if (a.family == "er") {
            return erdos_renyi(a.n, a.p, a.seed.value_or(default_seed()));
        }
        if (a.family == "csl") {
            return csl_graph(a.n, a.skip);
        }
        throw InvalidArgument("unknown family '" + a.family + "'");
    };
    const LabeledGraph g = build();
    std::vector<std::string> artifacts;
    emit(a.out, graph_to_json(g), artifacts);
    std::cerr << "generated " << a.family << " graph: " << g.node_count() << " nodes, "
              << g.edge_count() << " edges\n";
    return kExitOk;
}

struct EncodeArgs {
    std::string graph;
    std::string scheme = "gape";
    std::size_t k = 32;
    double gamma = 0.02;
    double beta = kDefaultPprBeta;
    std::optional<std::uint64_t> seed;
    std::string strategy = "auto";
    std::string via = "wgwa";
    std::string out;
};

int cmd_encode(const EncodeArgs& a)
{
    const LabeledGraph g = read_graph(a.graph);
    const Scheme scheme = parse_scheme(a.scheme);
    const SolveStrategy strategy = parse_strategy(a.strategy);
    EncodingMatrix enc;
    std::optional<SolveReport> report;
    switch (scheme) {
    case Scheme::gape: {
        const std::uint64_t seed = a.seed.value_or(default_seed());
        const Wgwa w = init_damped(a.k, static_cast<std::size_t>(g.max_label()), a.gamma, seed);
        try {
            auto [e, r] = encode_gape(g, w, strategy);
            enc = std::move(e);
            report = r;
        } catch (const NumericalError& e) {
            std::cerr << "solver failure: " << e.what() << "\n"
                      << "  strategy=" << to_string(strategy) << " k=" << a.k
                      << " gamma=" << a.gamma << " seed=" << seed
                      << " rho(A)=" << spectral_radius(g.adjacency()) << "\n";
            return kExitNumerical;
        }
        enc.meta.gamma = a.gamma;
        enc.meta.seed = seed;
        break;
    }
    case Scheme::lape:
        enc = lape(g, a.k);
        break;
    case Scheme::rw:
        enc = rw_encoding(g, a.k);
        break;
    case Scheme::ppr_diag:
        enc = ppr_diag_encoding(g, a.beta);
        break;
    case Scheme::pprp:
        enc = pprp_encoding(g, a.beta, a.k);
        break;
    case Scheme::sinusoidal: {
        if (!(g == string_graph(g.node_count()))) {
            throw InvalidArgument("sinusoidal needs a string graph (generate path)");
        }
        if (a.via == "wgwa") {
            enc = encode_sinusoidal_via_wgwa(g.node_count(), a.k);
        } else if (a.via == "reference") {
            enc = reference_sinusoidal(g.node_count(), a.k);
        } else {
            throw InvalidArgument("--via must be wgwa or reference");
        }
        break;
    }
    }
    write_text(a.out, encoding_to_csv(enc.values));
    const fs::path meta = sibling(a.out, ".meta.json");
    write_text(meta, meta_to_json(enc, report ? &*report : nullptr));
    std::cout << "wrote " << a.out << " (" << enc.nodes() << "x" << enc.dims() << ") and "
              << meta.string() << "\n";
    return kExitOk;
}

struct CompareArgs {
    std::string a;
    std::string b;
    bool normalize = false;
    std::optional<std::string> out;
};

nlohmann::json finite_or_null(const std::vector<double>& xs)
{
    nlohmann::json j = nlohmann::json::array();
    for (double x : xs) {
        j.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
    }
    return j;
}

int cmd_compare(const CompareArgs& a)
{
    EncodingMatrix x;
    EncodingMatrix y;
    x.values = encoding_from_csv(read_text(a.a));
    y.values = encoding_from_csv(read_text(a.b));
    const Comparison c = compare_encodings(x, y, a.normalize);
    nlohmann::json j;
    j["max_abs_diff"] = c.max_abs_diff;
    j["mse"] = c.mse;
    j["normalized"] = a.normalize;
    j["column_pearson"] = finite_or_null(c.column_pearson);
    j["node_pearson"] = finite_or_null(c.node_pearson);
    std::cout << "max_abs_diff " << format_number(c.max_abs_diff) << "\n"
              << "mse " << format_number(c.mse) << "\n"
              << "column_pearson";
    for (double r : c.column_pearson) {
        std::cout << ' ' << (std::isfinite(r) ? format_number(r) : "nan");
    }
    std::cout << "\n";
    if (a.out) {
        write_text(*a.out, j.dump(2) + "\n");
    }
    return kExitOk;
}

struct FitArgs {
    std::string graph;
    std::string target = "lape";
    int epochs = FitConfig{}.epochs;
    int steps = FitConfig{}.steps_per_epoch;
    double lr = FitConfig{}.lr;
    double target_tol = 0.0;
    std::optional<std::uint64_t> seed;
    std::vector<std::uint64_t> seeds;
    std::string strategy = "schur";
    std::string out;
};

int cmd_fit(const FitArgs& a)
{
    if (a.target != "lape") {
        throw InvalidArgument("only --target lape is supported");
    }
    FitConfig cfg;
    cfg.epochs = a.epochs;
    cfg.steps_per_epoch = a.steps;
    cfg.lr = a.lr;
    cfg.target_tol = a.target_tol;
    cfg.solver_strategy = parse_strategy(a.strategy);
    cfg.validate();

    const LabeledGraph g = with_distinct_labels(read_graph(a.graph));
    const EncodingMatrix target = lape(g, g.node_count());
    std::vector<std::uint64_t> seeds = a.seeds;
    if (seeds.empty()) {
        seeds.push_back(a.seed.value_or(default_seed()));
    }

    nlohmann::json runs = nlohmann::json::array();
    double mean_final = 0.0;
    double mean_initial = 0.0;
    for (std::uint64_t s : seeds) {
        cfg.seed = s;
        FitResult r;
        try {
            r = fit_to_target(g, target, cfg);
        } catch (const FitDiverged& e) {
            nlohmann::json j;
            j["diverged"] = true;
            j["error"] = e.what();
            j["seed"] = s;
            j["mse_trace"] = e.trace();
            write_text(a.out, j.dump(2) + "\n");
            std::cerr << e.what() << "\npartial trace:";
            for (double x : e.trace()) {
                std::cerr << ' ' << format_number(x);
            }
            std::cerr << "\n";
            return kExitNumerical;
        }
        auto j = nlohmann::json::parse(fit_result_to_json(r, cfg));
        const fs::path mu_path = sibling(a.out, ".seed" + std::to_string(s) + ".mu.csv");
        const fs::path alpha_path = sibling(a.out, ".seed" + std::to_string(s) + ".alpha.csv");
        write_text(mu_path, matrix_to_csv(r.fitted.mu));
        write_text(alpha_path, matrix_to_csv(r.fitted.alpha));
        j["weights"] = {{"mu", mu_path.string()}, {"alpha", alpha_path.string()}};
        runs.push_back(j);
        mean_final += r.final_mse;
        mean_initial += r.initial_mse;
        std::cout << "seed " << s << ": initial_mse " << format_number(r.initial_mse)
                  << " final_mse " << format_number(r.final_mse) << " |mu|_F "
                  << format_number(r.fitted.mu.frobenius()) << "\n";
    }
    mean_final /= static_cast<double>(seeds.size());
    mean_initial /= static_cast<double>(seeds.size());

    nlohmann::json out;
    if (seeds.size() == 1) {
        out = runs[0];
    } else {
        out["final_mse"] = mean_final;
        out["initial_mse"] = mean_initial;
        out["config"] = runs[0]["config"];
        out["config"].erase("seed");
        out["seeds"] = seeds;
        out["runs"] = runs;
    }
    write_text(a.out, out.dump(2) + "\n");
    std::cout << "mean final_mse " << format_number(mean_final) << " over " << seeds.size()
              << " seed(s); wrote " << a.out << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string suite = "all";
    std::string fixtures = GAPE_FIXTURE_DIR;
};

int cmd_verify(const VerifyArgs& a)
{
    const auto results = run_verify(a.suite, a.fixtures);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
        failed += r.passed ? 0 : 1;
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    if (failed > 0) {
        std::cout << "failures:\n";
        for (const auto& r : results) {
            if (!r.passed) {
                std::cout << "  " << r.name << "\n";
            }
        }
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gape-kit: graph automaton positional encodings"};
    app.require_subcommand(1);
    const std::string strategy_help = "auto, kronecker, fixed-point or schur";

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a generated graph as JSON");
    generate->add_option("family", gen.family, "path, cycle, er or csl")
        ->required()
        ->check(CLI::IsMember({"path", "cycle", "er", "csl"}));
    generate->add_option("--n", gen.n, "Number of nodes")->required();
    generate->add_option("--p", gen.p, "Edge probability (er)");
    generate->add_option("--skip", gen.skip, "Skip length (csl)");
    generate->add_option("--seed", gen.seed, "Seed (er); defaults to $GAPE_SEED or 0");
    generate->add_option("-o,--out", gen.out, "Output path; stdout if omitted");

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Compute an encoding as CSV plus a meta sidecar");
    encode->add_option("graph", enc.graph, "Graph JSON")->required();
    encode->add_option("--scheme", enc.scheme, "gape, lape, rw, ppr, pprp or sinusoidal");
    encode->add_option("--k", enc.k, "Encoding dimension (states for gape)");
    encode->add_option("--gamma", enc.gamma, "Damping of mu (gape)");
    encode->add_option("--beta", enc.beta, "Teleport probability (ppr, pprp)");
    encode->add_option("--seed", enc.seed, "Initialization seed (gape)");
    encode->add_option("--strategy", enc.strategy, strategy_help);
    encode->add_option("--via", enc.via, "wgwa or reference (sinusoidal)");
    encode->add_option("-o,--out", enc.out, "Output CSV")->required();

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "Compare two encoding CSVs");
    compare->add_option("a", cmp.a, "First encoding CSV")->required();
    compare->add_option("b", cmp.b, "Second encoding CSV")->required();
    compare->add_flag("--normalize", cmp.normalize, "Min-max normalize each column first");
    compare->add_option("-o,--out", cmp.out, "Write the metrics as JSON");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit GAPE weights to a target encoding");
    fit->add_option("graph", fa.graph, "Graph JSON")->required();
    fit->add_option("--target", fa.target, "Target scheme (lape)");
    fit->add_option("--epochs", fa.epochs, "Epochs");
    fit->add_option("--steps-per-epoch", fa.steps, "Gradient steps per epoch");
    fit->add_option("--lr", fa.lr, "Learning rate");
    fit->add_option("--target-tol", fa.target_tol, "Stop once the loss is at most this");
    fit->add_option("--seed", fa.seed, "Initialization seed");
    fit->add_option("--seeds", fa.seeds, "Several seeds; the reported MSE is their mean")
        ->delimiter(',');
    fit->add_option("--strategy", fa.strategy, strategy_help);
    fit->add_option("-o,--out", fa.out, "FitResult JSON")->required();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run equivalence checks on fixture graphs");
    verify->add_option("suite", va.suite, "all, prop1, lape_remark, ppr_k1, solvers or pprp_rw")
        ->check(CLI::IsMember(verify_suites()));
    verify->add_option("--fixtures", va.fixtures, "Fixture directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) {
            return cmd_generate(gen);
        }
        if (*encode) {
            return cmd_encode(enc);
        }
        if (*compare) {
            return cmd_compare(cmp);
        }
        if (*fit) {
            return cmd_fit(fa);
        }
        return cmd_verify(va);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
