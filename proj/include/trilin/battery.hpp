#pragma once

#include <trilin/sat.hpp>
#include <trilin/search.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace trilin {

enum class CheckStatus { Pass, Fail, Unknown, Error };

std::string to_string(CheckStatus s);

struct CheckResult {
    int id = 0;
    std::string name;
    CheckStatus status = CheckStatus::Unknown;
    std::string detail;
    double seconds = 0.0;
    /// A pass that takes longer than this is reported as a failure. Zero
    /// means no allowance.
    double limit_seconds = 0.0;
};

struct BatteryConfig {
    SearchLimits search;
    /// Zero means unlimited.
    std::uint64_t template_node_budget = 0;
    DecideLimits decide;
    std::optional<std::string> appendix_dir;
    std::size_t corpus_size = 56;
    std::uint32_t corpus_seed = 20250117;
    std::size_t random_closure_graphs = 200;
    /// Empty runs every check; otherwise only the listed ids (1..10).
    std::vector<int> only;
};

/// Deterministic 3-CNF corpus: n in {3, 4}, m in {1, 2, 3}, three distinct
/// variables per clause, followed by the 8-clause formula over x1..x3 that
/// lists every sign pattern.
std::vector<CnfFormula> acceptance_corpus(std::size_t size, std::uint32_t seed);

bool satisfiable_by_truth_table(const CnfFormula& f);

/// Runs the ten finite checks in order. Budget exhaustion turns a check
/// Unknown; any other exception turns it Error. `on_result` fires after each
/// check.
std::vector<CheckResult> run_battery(const BatteryConfig& config,
                                     const std::function<void(const CheckResult&)>& on_result = {});

/// "[PASS] 3 binary-enforced-sun: ... (0.25 s)"
std::string format_result(const CheckResult& r);

/// 0 when everything passed, 4 on any Error, else 1 on any Fail, else 3.
int battery_exit_code(const std::vector<CheckResult>& results);

} // namespace trilin
