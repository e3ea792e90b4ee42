#include "config.hpp"

#include <trilin/appendix.hpp>
#include <trilin/battery.hpp>
#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/graph_io.hpp>
#include <trilin/sat.hpp>
#include <trilin/search.hpp>
#include <trilin/tlg.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using namespace trilin;
using cli::Config;
using cli::OutputFormat;
using nlohmann::json;

enum Exit : int { Ok = 0, Negative = 1, Usage = 2, Unknown = 3, Internal = 4 };

/// Raised for bad arguments that CLI11 cannot catch on its own.
struct UsageError : Error {
    using Error::Error;
};

void emit(const Config& config, const std::string& text)
{
    if (config.out)
        write_file(*config.out, text);
    else
        std::cout << text;
}

void emit_json(const Config& config, const json& j) { emit(config, j.dump(2) + "\n"); }

void emit_graph(const Config& config, const Graph& g, const json& full)
{
    switch (config.format) {
    case OutputFormat::EdgeList:
        emit(config, to_edge_list(g));
        break;
    case OutputFormat::Dot:
        emit(config, to_dot(g));
        break;
    case OutputFormat::Json:
        emit_json(config, full);
        break;
    }
}

json assignment_json(const Assignment& x)
{
    json out = json::array();
    for (bool b : x)
        out.push_back(b ? 1 : 0);
    return out;
}

/// "101", "1,0,1" or "1 0 1"; a path to a file holding one of these also
/// works.
Assignment parse_assignment(std::string text)
{
    if (std::filesystem::is_regular_file(text))
        text = read_file(text);
    Assignment x;
    for (char c : text) {
        if (c == '0' || c == '1')
            x.push_back(c == '1');
        else if (c != ',' && c != ' ' && c != '\n' && c != '\t' && c != '\r')
            throw ParseError(std::string("assignment may only contain 0, 1 and separators, found '") + c
                                 + "'",
                             0);
    }
    return x;
}

CnfFormula read_cnf(const std::string& path) { return parse_dimacs(read_file(path)); }

/// Plain witness JSON, or an appendix preimage table whose target is
/// rebuilt from the clause table.
PreimageWitness read_witness(const std::string& path, const Config& config)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw ParseError(path + ": " + ex.what(), 0);
    }
    if (j.is_object() && j.value("format", "") == "trilin-appendix") {
        if (j.value("target", "") != "table1")
            throw ParseError(path + ": appendix preimages must target table1", 0);
        json full = {{"target", graph_to_json(load_appendix_clause_gadget(config.appendix_dir).graph)},
                     {"candidate", j.at("candidate")},
                     {"map", j.at("map")}};
        return witness_from_json(full);
    }
    return witness_from_json(j);
}

std::size_t param(const std::vector<std::string>& params, std::size_t i, const std::string& kind)
{
    if (i >= params.size())
        throw UsageError("gadget " + kind + " needs " + std::to_string(i + 1) + " parameter(s)");
    try {
        std::size_t used = 0;
        auto value = std::stoul(params[i], &used);
        if (used != params[i].size())
            throw std::invalid_argument(params[i]);
        return value;
    } catch (const std::logic_error&) {
        throw UsageError("gadget " + kind + ": '" + params[i] + "' is not a non-negative integer");
    }
}

GadgetBlueprint build_gadget(const std::string& kind, const std::vector<std::string>& p,
                             const Config& config)
{
    auto arity = [&](std::size_t n) {
        if (p.size() != n)
            throw UsageError("gadget " + kind + " takes " + std::to_string(n) + " parameter(s), got "
                             + std::to_string(p.size()));
    };
    if (kind == "bowtie") {
        arity(0);
        return make_bowtie();
    }
    if (kind == "double-triangle") {
        arity(0);
        return make_double_triangle();
    }
    if (kind == "appendix-clause") {
        arity(0);
        return load_appendix_clause_gadget(config.appendix_dir);
    }
    if (kind == "clause") {
        arity(0);
        auto sun = make_sun(12);
        return join_clause(sun, sun, sun);
    }
    arity(kind == "large-variable" || kind == "cluster" ? 2 : 1);
    auto k = param(p, 0, kind);
    if (kind == "sun")
        return make_sun(k);
    if (kind == "wheel")
        return make_wheel(k);
    if (kind == "squared-cycle")
        return make_squared_cycle(k);
    if (kind == "fan")
        return make_fan(k);
    if (kind == "strip")
        return make_triangle_strip(k);
    if (kind == "binary-enforced-sun")
        return make_binary_enforced_sun(k);
    if (kind == "wire")
        return make_wire(k);
    if (kind == "cluster")
        return make_variable_cluster(k, param(p, 1, kind));
    if (kind == "large-variable")
        return make_large_variable_gadget(k, param(p, 1, kind));
    throw UsageError("unknown gadget kind '" + kind + "'");
}

json decision_json(const Decision& d, const std::optional<std::string>& witness_file)
{
    json out = {{"status", to_string(d.status)},
                {"assignment", d.status == DecisionStatus::Sat ? assignment_json(d.assignment) : json()},
                {"witness_file", witness_file ? json(*witness_file) : json()}};
    if (!d.reason.empty())
        out["reason"] = d.reason;
    return out;
}

int run_guarded(const std::function<int()>& body)
{
    try {
        return body();
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return Usage;
    } catch (const ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return Usage;
    } catch (const GraphError& ex) {
        std::cerr << "graph error: " << ex.what() << "\n";
        return Usage;
    } catch (const CapacityError& ex) {
        std::cerr << "capacity: " << ex.what() << "\n";
        return Usage;
    } catch (const GuardExceeded& ex) {
        std::cerr << "guard: " << ex.what() << "\n";
        return Usage;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "budget: " << ex.what() << "\n";
        return Unknown;
    } catch (const StructuralError& ex) {
        std::cerr << "structural: " << ex.what() << "\n";
        return Internal;
    } catch (const IntegrityError& ex) {
        std::cerr << "integrity: " << ex.what() << "\n";
        return Internal;
    } catch (const Error& ex) {
        // File I/O failures come through as plain Error with the path.
        std::cerr << "error: " << ex.what() << "\n";
        return Usage;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return Internal;
    }
}

} // namespace

int main(int argc, char** argv)
{
    Config config;
    if (const char* path = std::getenv("TRILIN_CONFIG")) {
        int code = run_guarded([&] {
            cli::apply_config_file(config, path);
            return Ok;
        });
        if (code != Ok)
            return code;
    }

    CLI::App app{"Triangular line graphs: operators, gadgets, preimage search and the 3-SAT reduction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> format, out, appendix_dir;
    std::optional<unsigned> workers;
    std::optional<std::int64_t> time_budget;
    std::optional<std::uint64_t> node_budget;
    std::optional<std::size_t> max_vars, max_target_vertices;
    app.add_option("--format", format, "json (default), edgelist or dot")->check(
        CLI::IsMember({"json", "edgelist", "dot"}));
    app.add_option("--out", out, "write output here instead of stdout");
    app.add_option("--workers", workers, "search threads")->check(CLI::PositiveNumber);
    app.add_option("--time-budget", time_budget, "milliseconds, 0 = unlimited")->check(CLI::NonNegativeNumber);
    app.add_option("--node-budget", node_budget, "search nodes, 0 = unlimited");
    app.add_option("--max-vars", max_vars, "decide refuses formulas with more variables");
    app.add_option("--max-target-vertices", max_target_vertices, "brute-force size cap");
    app.add_option("--appendix-dir", appendix_dir, "read appendix tables from this directory");

    std::function<int()> action;

    auto* tlg = app.add_subcommand("tlg", "graph operators")->require_subcommand(1);
    std::string graph_file;
    auto* tlg_compute = tlg->add_subcommand("compute", "T(G) and the edge-to-vertex bijection");
    tlg_compute->add_option("graph", graph_file)->required();
    tlg_compute->callback([&] {
        action = [&]() -> int {
            auto r = triangular_line_graph(parse_graph(read_file(graph_file)));
            emit_graph(config, r.derived,
                       {{"source", graph_to_json(r.source)},
                        {"derived", graph_to_json(r.derived)},
                        {"edge_to_vertex", r.edge_to_vertex}});
            return Ok;
        };
    });
    auto* tlg_line = tlg->add_subcommand("line", "line graph L(G)");
    tlg_line->add_option("graph", graph_file)->required();
    tlg_line->callback([&] {
        action = [&]() -> int {
            auto r = line_graph(parse_graph(read_file(graph_file)));
            emit_graph(config, r.derived,
                       {{"source", graph_to_json(r.source)},
                        {"derived", graph_to_json(r.derived)},
                        {"edge_to_vertex", r.edge_to_vertex}});
            return Ok;
        };
    });
    auto* tlg_gallai = tlg->add_subcommand("gallai", "Gallai graph");
    tlg_gallai->add_option("graph", graph_file)->required();
    tlg_gallai->callback([&] {
        action = [&]() -> int {
            auto g = gallai_graph(parse_graph(read_file(graph_file)));
            emit_graph(config, g, graph_to_json(g));
            return Ok;
        };
    });

    auto* gadget = app.add_subcommand("gadget", "gadget blueprints")->require_subcommand(1);
    std::string kind;
    std::vector<std::string> params;
    auto* gadget_build = gadget->add_subcommand(
        "build", "sun k | wheel k | squared-cycle k | fan k | strip k | bowtie | double-triangle | "
                 "binary-enforced-sun k | wire length | cluster variable m | "
                 "large-variable variable index | clause | appendix-clause | appendix-preimage wheels");
    gadget_build->add_option("kind", kind)->required();
    gadget_build->add_option("params", params);
    gadget_build->callback([&] {
        action = [&]() -> int {
            if (kind == "appendix-preimage") {
                if (params.size() != 1)
                    throw UsageError("gadget appendix-preimage takes 1 parameter (0, 1 or 2 wheels)");
                auto w = load_appendix_preimage(static_cast<int>(param(params, 0, kind)), config.appendix_dir);
                emit_graph(config, w.candidate, witness_to_json(w));
                return Ok;
            }
            auto bp = build_gadget(kind, params, config);
            emit_graph(config, bp.graph, blueprint_to_json(bp));
            return Ok;
        };
    });

    auto* preimage = app.add_subcommand("preimage", "preimage search and certificates")->require_subcommand(1);
    bool first_only = false, labeled = false;
    auto* preimage_solve = preimage->add_subcommand("solve", "all preimage classes by exhaustive search");
    preimage_solve->add_option("graph", graph_file)->required();
    preimage_solve->add_flag("--first", first_only, "stop at the first preimage");
    preimage_solve->add_flag("--labeled", labeled, "also count labeled preimages");
    preimage_solve->callback([&] {
        action = [&]() -> int {
            auto h = parse_graph(read_file(graph_file)).without_labels();
            auto limits = cli::search_limits(config);
            if (first_only) {
                auto d = is_tlg_small(h, limits);
                json j = {{"verdict", to_string(d.verdict)}};
                if (d.witness)
                    j["witness"] = witness_to_json(*d.witness);
                if (!d.reason.empty())
                    j["reason"] = d.reason;
                if (d.witness && config.format != OutputFormat::Json)
                    emit_graph(config, d.witness->candidate, j);
                else
                    emit_json(config, j);
                return d.verdict == Verdict::Yes ? Ok : d.verdict == Verdict::No ? Negative : Unknown;
            }
            auto found = brute_force_preimages(h, limits);
            json witnesses = json::array();
            for (const auto& w : found)
                witnesses.push_back(witness_to_json(w));
            json j = {{"verdict", found.empty() ? "NO" : "YES"},
                      {"classes", found.size()},
                      {"witnesses", std::move(witnesses)}};
            if (labeled)
                j["labeled"] = count_labeled_preimages(h, limits);
            if (!found.empty() && config.format != OutputFormat::Json) {
                std::string text;
                for (const auto& w : found)
                    text += config.format == OutputFormat::Dot ? to_dot(w.candidate) : to_edge_list(w.candidate) + "\n";
                emit(config, text);
            } else {
                emit_json(config, j);
            }
            return found.empty() ? Negative : Ok;
        };
    });
    std::string witness_file;
    auto* preimage_verify = preimage->add_subcommand("verify", "check a witness; prints VALID or INVALID");
    preimage_verify->add_option("witness", witness_file)->required();
    preimage_verify->callback([&] {
        action = [&]() -> int {
            bool ok = false;
            std::string why;
            try {
                ok = verify_certificate(read_witness(witness_file, config));
            } catch (const CertificateError& ex) {
                why = ex.what();
            }
            emit(config, ok ? "VALID\n" : "INVALID\n");
            if (!why.empty())
                std::cerr << why << "\n";
            return ok ? Ok : Negative;
        };
    });

    std::string cnf_file;
    auto* reduce = app.add_subcommand("reduce", "compile a 3-CNF formula into G_phi");
    reduce->add_option("cnf", cnf_file)->required();
    reduce->callback([&] {
        action = [&]() -> int {
            auto r = compile(read_cnf(cnf_file));
            json legs = json::array();
            for (const auto& l : r.clause_legs)
                legs.push_back(l);
            emit_graph(config, r.graph.graph,
                       {{"formula", to_dimacs(r.formula)},
                        {"vertices", r.graph.graph.vertex_count()},
                        {"edges", r.graph.graph.edge_count()},
                        {"clause_legs", std::move(legs)},
                        {"blueprint", blueprint_to_json(r.graph)}});
            return Ok;
        };
    });

    std::optional<std::string> witness_out;
    auto* decide_cmd = app.add_subcommand("decide", "SAT / UNSAT through preimages of G_phi");
    decide_cmd->add_option("cnf", cnf_file)->required();
    decide_cmd->add_option("--witness-out", witness_out, "write the preimage of G_phi here on SAT");
    decide_cmd->callback([&] {
        action = [&]() -> int {
            auto d = decide(read_cnf(cnf_file), cli::decide_limits(config));
            std::optional<std::string> written;
            if (d.witness && witness_out) {
                write_file(*witness_out, witness_to_json(*d.witness).dump() + "\n");
                written = witness_out;
            }
            emit_json(config, decision_json(d, written));
            switch (d.status) {
            case DecisionStatus::Sat:
                return Ok;
            case DecisionStatus::Unsat:
                return Negative;
            case DecisionStatus::Unknown:
                break;
            }
            return Unknown;
        };
    });

    std::string assignment_text;
    auto* witness_cmd = app.add_subcommand("witness", "preimage of G_phi realizing an assignment");
    witness_cmd->add_option("cnf", cnf_file)->required();
    witness_cmd->add_option("assignment", assignment_text, "e.g. 101 or 1,0,1, or a file")->required();
    witness_cmd->callback([&] {
        action = [&]() -> int {
            auto r = compile(read_cnf(cnf_file));
            auto x = parse_assignment(assignment_text);
            if (x.size() != r.formula.variable_count)
                throw UsageError("assignment has " + std::to_string(x.size()) + " values, formula has "
                                 + std::to_string(r.formula.variable_count) + " variables");
            try {
                auto w = witness_from_assignment(r, x);
                emit_graph(config, w.candidate, witness_to_json(w));
                return Ok;
            } catch (const UnsatisfiedClause& ex) {
                std::cerr << ex.what() << "\n";
                return Negative;
            } catch (const StructuralError& ex) {
                std::cerr << "no preimage extends this assignment: " << ex.what() << "\n";
                return Negative;
            }
        };
    });

    auto* assignment_cmd = app.add_subcommand("assignment", "read the assignment encoded by a preimage of G_phi");
    assignment_cmd->add_option("cnf", cnf_file)->required();
    assignment_cmd->add_option("witness", witness_file)->required();
    assignment_cmd->callback([&] {
        action = [&]() -> int {
            auto r = compile(read_cnf(cnf_file));
            try {
                auto x = assignment_from_witness(r, read_witness(witness_file, config));
                emit_json(config, {{"assignment", assignment_json(x)}});
                return Ok;
            } catch (const CertificateError& ex) {
                std::cerr << ex.what() << "\n";
                return Negative;
            }
        };
    });

    auto* check = app.add_subcommand("check", "verification battery")->require_subcommand(1);
    std::vector<int> only;
    auto* lemmas = check->add_subcommand("lemmas", "run the ten finite checks and report each");
    lemmas->add_option("--only", only, "check ids to run")->check(CLI::Range(1, 10))->delimiter(',');
    lemmas->callback([&] {
        action = [&]() -> int {
            auto battery = cli::battery_config(config);
            battery.only = only;
            std::ostringstream report;
            auto results = run_battery(battery, [&](const CheckResult& r) {
                if (config.out)
                    report << format_result(r) << "\n";
                else
                    std::cout << format_result(r) << std::endl;
            });
            if (config.out)
                write_file(*config.out, report.str());
            return battery_exit_code(results);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Usage;
    }

    return run_guarded([&] {
        if (format)
            config.format = cli::parse_format(*format);
        if (out)
            config.out = out;
        if (workers)
            config.workers = *workers;
        if (time_budget)
            config.time_budget = std::chrono::milliseconds(*time_budget);
        if (node_budget)
            config.node_budget = *node_budget;
        if (max_vars)
            config.max_vars = *max_vars;
        if (max_target_vertices)
            config.max_target_vertices = *max_target_vertices;
        if (appendix_dir)
            config.appendix_dir = appendix_dir;
        return action();
    });
}
