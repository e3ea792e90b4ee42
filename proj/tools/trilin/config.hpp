#pragma once

#include <trilin/battery.hpp>
#include <trilin/sat.hpp>
#include <trilin/search.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace trilin::cli {

enum class OutputFormat { Json, EdgeList, Dot };

OutputFormat parse_format(const std::string& name);

/// Settings shared by every subcommand. Built from the defaults below, then
/// the JSON file named by TRILIN_CONFIG, then command-line flags.
struct Config {
    OutputFormat format = OutputFormat::Json;
    std::optional<std::string> out;
    unsigned workers = 1;
    /// Zero means unlimited.
    std::chrono::milliseconds time_budget{0};
    std::uint64_t node_budget = 0;
    std::size_t max_vars = 20;
    std::size_t max_target_vertices = 16;
    std::optional<std::string> appendix_dir;
};

/// Keys: format, out, workers, time_budget_ms, node_budget, max_vars,
/// max_target_vertices, appendix_dir. Unknown keys and wrong types throw
/// ParseError.
void apply_config_file(Config& config, const std::string& path);

SearchLimits search_limits(const Config& config);
DecideLimits decide_limits(const Config& config);
BatteryConfig battery_config(const Config& config);

} // namespace trilin::cli
