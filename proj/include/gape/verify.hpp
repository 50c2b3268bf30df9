#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gape {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    /// Measured quantity and the bound it was held to.
    double value = 0.0;
    double threshold = 0.0;
};

/// "all", "prop1", "lape_remark", "ppr_k1", "solvers", "pprp_rw".
const std::vector<std::string>& verify_suites();

/// Runs a suite against the graph fixtures in `fixture_dir`. Results are sorted
/// by check name. A check that throws is reported as failed, never propagated.
std::vector<CheckResult> run_verify(std::string_view suite,
                                    const std::filesystem::path& fixture_dir);

}  // namespace gape
