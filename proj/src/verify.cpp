#include "gape/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "gape/baseline.hpp"
#include "gape/compare.hpp"
#include "gape/errors.hpp"
#include "gape/io.hpp"
#include "gape/numerics.hpp"
#include "gape/sylvester.hpp"
#include "gape/wgwa.hpp"

namespace gape {

namespace {

using Checks = std::vector<CheckResult>;

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// value <= threshold passes; NaN fails.
CheckResult at_most(std::string name, double value, double threshold)
{
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.threshold = threshold;
    r.passed = value <= threshold;
    r.detail = fmt(value) + " <= " + fmt(threshold);
    return r;
}

CheckResult at_least(std::string name, double value, double threshold)
{
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.threshold = threshold;
    r.passed = value >= threshold;
    r.detail = fmt(value) + " >= " + fmt(threshold);
    return r;
}

void guarded(Checks& out, const std::string& name, const std::function<void(Checks&)>& body)
{
    try {
        body(out);
    } catch (const std::exception& e) {
        CheckResult r;
        r.name = name;
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
        r.value = std::nan("");
        out.push_back(std::move(r));
    }
}

LabeledGraph fixture(const std::filesystem::path& dir, const std::string& name)
{
    return read_graph(dir / (name + ".json"));
}

void prop1(Checks& out)
{
    for (std::size_t len : {1, 10, 50, 200}) {
        for (std::size_t k : {4, 64, 512}) {
            const std::string name =
                "prop1/length=" + std::to_string(len) + ",k=" + std::to_string(k);
            guarded(out, name, [&](Checks& o) {
                const auto via = encode_sinusoidal_via_wgwa(len, k);
                const auto ref = reference_sinusoidal(len, k);
                o.push_back(at_most(name, max_abs_diff(via.values, ref.values), 1e-6));
            });
        }
    }
}

const std::vector<std::string> kUndirectedFixtures = {
    "triangle", "path2", "er10_p04", "cycle7", "cycle6_tails", "cycle6_chord",
    "cycle6_square", "molecule29", "er20_p07", "er20_p02", "er20_p005"};

void lape_remark(Checks& out, const std::filesystem::path& dir)
{
    for (const auto& f : kUndirectedFixtures) {
        const std::string name = "lape_remark/" + f;
        guarded(out, name, [&](Checks& o) {
            const auto c = lape_wgwa_construction(fixture(dir, f), 1.0);
            o.push_back(at_most(name, c.residual, 1e-7));
        });
    }
}

// Independent of the linear solve: beta * sum_i (1 - beta)^i W^i.
DenseMatrix ppr_series(const LabeledGraph& g, double beta)
{
    const DenseMatrix w = walk_matrix(g);
    const std::size_t n = g.node_count();
    DenseMatrix power = DenseMatrix::identity(n);
    DenseMatrix sum(n, n);
    double coeff = beta;
    for (int i = 0; i < 100000 && coeff > 1e-18; ++i) {
        sum += power * coeff;
        power = matmul(power, w);
        coeff *= 1.0 - beta;
    }
    return sum;
}

void ppr_k1(Checks& out, const std::filesystem::path& dir)
{
    for (const std::string f : {"triangle", "path2", "er10_p04", "cycle7"}) {
        for (double beta : {0.15, 0.5, 0.9}) {
            const std::string tag = f + ",beta=" + fmt(beta);
            guarded(out, "ppr_k1/gape/" + tag, [&](Checks& o) {
                const auto g = fixture(dir, f);
                const DenseMatrix direct = ppr_matrix(g, beta);
                const auto as_gape = gape_as_ppr(g, beta);
                o.push_back(at_most("ppr_k1/gape/" + tag, max_abs_diff(as_gape.values, direct), 1e-8));
                o.push_back(
                    at_most("ppr_k1/series/" + tag, max_abs_diff(ppr_series(g, beta), direct), 1e-9));
            });
        }
    }
}

void solvers(Checks& out)
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> n_dist(1, 30);
    std::uniform_int_distribution<std::size_t> k_dist(1, 8);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = n_dist(rng);
        const std::size_t k = k_dist(rng);
        const double p = u01(rng);
        const double target_rho = 0.9 * u01(rng);
        const LabeledGraph g = erdos_renyi(n, p, rng());
        DenseMatrix mu = random_gaussian(k, k, rng);
        const DenseMatrix c = random_gaussian(k, n, rng);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%03d", i);
        const std::string name = std::string("solvers/instance_") + buf;
        guarded(out, name, [&](Checks& o) {
            const double rho_a = spectral_radius(g.adjacency());
            const double rho_mu = spectral_radius(mu);
            if (rho_a > 0.0 && rho_mu > 0.0) {
                mu *= target_rho / (rho_a * rho_mu);
            }
            const DenseMatrix& a = g.adjacency();
            const auto kr = solve_kronecker(mu, a, c);
            const auto fp = solve_fixed_point(mu, a, c);
            const auto sc = solve_schur(mu, a, c);
            const double agree = std::max({max_abs_diff(kr.p, fp.p), max_abs_diff(kr.p, sc.p),
                                           max_abs_diff(fp.p, sc.p)});
            const double resid =
                std::max({kr.report.residual, fp.report.residual, sc.report.residual});
            o.push_back(at_most(name + "/agreement", agree, 1e-7));
            o.push_back(at_most(name + "/residual", resid, 1e-6));
        });
    }
}

// Only columns along which RW varies carry a correlation; on a bipartite graph the
// odd return probabilities vanish identically.
void pprp_rw(Checks& out, const std::filesystem::path& dir)
{
    constexpr double beta = 0.9;
    constexpr std::size_t k_enc = 6;
    for (const std::string f : {"cycle6_tails", "cycle6_chord", "cycle6_square"}) {
        const std::string name = "pprp_rw/" + f;
        guarded(out, name, [&](Checks& o) {
            const auto g = fixture(dir, f);
            const auto rw = minmax_normalize(rw_encoding(g, k_enc));
            const auto pprp = minmax_normalize(pprp_encoding(g, beta, k_enc));
            double worst = 1.0;
            std::size_t used = 0;
            for (std::size_t j = 0; j < k_enc; ++j) {
                const Vector x = rw.values.column(j);
                const Vector y = pprp.values.column(j);
                const double r = pearson(x, y);
                if (std::isnan(r) && std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
                    continue;
                }
                worst = std::isnan(r) ? r : std::min(worst, r);
                ++used;
            }
            if (used == 0) {
                throw NumericalError("no non-constant RW column");
            }
            o.push_back(at_least(name, worst, 0.99));
        });
    }
}

}  // namespace

const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> names = {"all",     "prop1",   "lape_remark",
                                                   "ppr_k1",  "solvers", "pprp_rw"};
    return names;
}

std::vector<CheckResult> run_verify(std::string_view suite, const std::filesystem::path& fixture_dir)
{
    const auto& names = verify_suites();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw InvalidArgument("unknown verify suite '" + std::string(suite) + "'");
    }
    const bool all = suite == "all";
    Checks out;
    if (all || suite == "prop1") {
        prop1(out);
    }
    if (all || suite == "lape_remark") {
        lape_remark(out, fixture_dir);
    }
    if (all || suite == "ppr_k1") {
        ppr_k1(out, fixture_dir);
    }
    if (all || suite == "solvers") {
        solvers(out);
    }
    if (all || suite == "pprp_rw") {
        pprp_rw(out, fixture_dir);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return out;
}

}  // namespace gape
