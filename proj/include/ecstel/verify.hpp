#pragma once

// Grid verification: every closed form against the Fock-space oracle, plus
// the analytic special cases and the Landau conservation diagnostics.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ecstel::verify {

struct CheckResult {
    std::string name;
    double max_deviation;
    double tolerance;
    bool passed;
    /// Reported but never gating.
    bool informational = false;
    std::string note;
};

struct SuiteConfig {
    std::vector<double> labels{0.3, 0.6, 1.0, 1.5};
    /// Fixed per-mode cutoff; the heuristic per grid point when unset.
    std::optional<std::size_t> cutoff;
    /// Replaces every gating tolerance.
    std::optional<double> tolerance;
    std::size_t lattice_size = 20;
    bool include_landau = true;
    bool parallel = false;
};

struct SuiteReport {
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool all_passed() const;
    const CheckResult *find(const std::string &name) const;
};

/// Grid labels for `verify --alpha-max`: the defaults up to the maximum, plus
/// the maximum itself when it is not already present.
std::vector<double> labels_up_to(double alpha_max);

SuiteReport run_suite(const SuiteConfig &config);

}  // namespace ecstel::verify
