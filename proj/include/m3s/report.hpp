#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace m3s {

struct SuiteConfig {
    int n = 0;
    std::uint64_t seed = 42;
    int samples = 25;
    int probes = 20;
    double tol = 1e-6;       // scales every pinned tolerance by tol / 1e-6
    double fd_step = 1e-4;
    std::vector<std::string> suites;  // empty means all
    bool exhaustive = false;          // frame-tuple contraction for low ranks
    bool inject_fault = false;        // perturbs eta_1 by 0.01 dx^1

    void validate() const;  // throws ConfigError
};

struct CheckResult {
    std::string check_id;
    std::string paper_anchor;
    int n = 0;
    int samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    std::string status;  // pass | fail | reported
    std::string notes;
};

struct Report {
    SuiteConfig config;
    std::vector<CheckResult> results;  // sorted by check_id
    double duration_seconds = 0.0;
    std::string version;
};

inline constexpr const char* k_version = "0.1.0";

const std::vector<std::string>& suite_names();
// the closed set of anchor tags a CheckResult may carry
const std::set<std::string>& anchor_registry();

Report run_suites(const SuiteConfig& cfg);

std::string to_json(const Report& report);
std::string to_text(const Report& report);
// 0 when nothing failed, 1 otherwise ("reported" never fails a run)
int exit_code(const Report& report);

} // namespace m3s
