#include "config.hpp"

#include <trilin/error.hpp>
#include <trilin/graph_io.hpp>

#include <json.hpp>

namespace trilin::cli {

OutputFormat parse_format(const std::string& name)
{
    if (name == "json")
        return OutputFormat::Json;
    if (name == "edgelist")
        return OutputFormat::EdgeList;
    if (name == "dot")
        return OutputFormat::Dot;
    throw ParseError("unknown output format '" + name + "' (json, edgelist, dot)", 0);
}

void apply_config_file(Config& config, const std::string& path)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError("config " + path + ": " + ex.what(), 0);
    }
    if (!j.is_object())
        throw ParseError("config " + path + ": top level must be an object", 0);
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "format")
                config.format = parse_format(value.get<std::string>());
            else if (key == "out")
                config.out = value.get<std::string>();
            else if (key == "workers")
                config.workers = value.get<unsigned>();
            else if (key == "time_budget_ms")
                config.time_budget = std::chrono::milliseconds(value.get<std::int64_t>());
            else if (key == "node_budget")
                config.node_budget = value.get<std::uint64_t>();
            else if (key == "max_vars")
                config.max_vars = value.get<std::size_t>();
            else if (key == "max_target_vertices")
                config.max_target_vertices = value.get<std::size_t>();
            else if (key == "appendix_dir")
                config.appendix_dir = value.get<std::string>();
            else
                throw ParseError("config " + path + ": unknown key '" + key + "'", 0);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError("config " + path + ": " + ex.what(), 0);
    }
}

SearchLimits search_limits(const Config& config)
{
    SearchLimits limits;
    limits.max_target_vertices = config.max_target_vertices;
    limits.time_budget = config.time_budget;
    limits.node_budget = config.node_budget;
    limits.workers = config.workers;
    return limits;
}

DecideLimits decide_limits(const Config& config)
{
    DecideLimits limits;
    limits.max_vars = config.max_vars;
    limits.node_budget = config.node_budget;
    limits.time_budget = config.time_budget;
    limits.workers = config.workers;
    return limits;
}

BatteryConfig battery_config(const Config& config)
{
    BatteryConfig battery;
    battery.search = search_limits(config);
    battery.template_node_budget = config.node_budget;
    battery.decide = decide_limits(config);
    battery.appendix_dir = config.appendix_dir;
    return battery;
}

} // namespace trilin::cli
