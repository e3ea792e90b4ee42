#include <trilin/appendix.hpp>
#include <trilin/battery.hpp>
#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/template_solver.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace trilin {

namespace {

/// Thrown inside a check to record a failed claim with its reason.
struct Failed {
    std::string why;
};

void expect(bool ok, const std::string& why)
{
    if (!ok)
        throw Failed{why};
}

bool iso(const Graph& a, const Graph& b)
{
    return find_isomorphism(a.without_labels(), b.without_labels()).has_value();
}

TemplateOptions template_options(const BatteryConfig& config)
{
    TemplateOptions o;
    o.node_budget = config.template_node_budget;
    return o;
}

/// Graphs with 1..max_edges edges and no isolated vertices, one per
/// isomorphism class.
std::vector<Graph> graphs_up_to_edges(std::size_t max_edges)
{
    std::vector<Graph> out;
    std::vector<Graph> layer{Graph{}};
    for (std::size_t m = 1; m <= max_edges; ++m) {
        std::set<std::string> seen;
        std::vector<Graph> next;
        for (const auto& g : layer) {
            auto n = static_cast<VertexId>(g.vertex_count());
            std::vector<std::pair<Edge, std::size_t>> options;
            for (VertexId a = 0; a < n; ++a) {
                for (VertexId b = a + 1; b < n; ++b)
                    if (!g.has_edge(a, b))
                        options.push_back({Edge(a, b), n});
                options.push_back({Edge(a, n), n + 1});
            }
            options.push_back({Edge(n, n + 1), n + 2});
            for (const auto& [e, size] : options) {
                std::vector<Edge> edges(g.edges());
                edges.push_back(e);
                auto h = Graph::build(size, std::span<const Edge>(edges));
                if (seen.insert(canonical_form(h)).second)
                    next.push_back(std::move(h));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

PreimageWitness operator_witness(const Graph& g)
{
    auto t = triangular_line_graph(g);
    return {t.derived, t.source, t.edge_to_vertex};
}

/// Smallest triangle-induced superset of `seed`.
std::vector<VertexId> triangle_closure(const Graph& h, std::vector<VertexId> seed)
{
    std::vector<char> in(h.vertex_count(), 0);
    for (auto v : seed)
        in[v] = 1;
    auto triangles = enumerate_triangles(h);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : triangles) {
            int inside = in[t.vertices[0]] + in[t.vertices[1]] + in[t.vertices[2]];
            if (inside == 2) {
                for (auto v : t.vertices)
                    in[v] = 1;
                changed = true;
            }
        }
    }
    std::vector<VertexId> out;
    for (VertexId v = 0; v < h.vertex_count(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}

std::string pattern_string(const std::vector<TemplateChoice>& choices)
{
    std::string s;
    for (auto c : choices)
        s += c == TemplateChoice::Wheel ? 'W' : 'C';
    return s;
}

std::string check_operator(const BatteryConfig&)
{
    auto k4e = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
    expect(iso(triangular_line_graph(k4e).derived, make_bowtie().graph), "T(K4-e) is not a bowtie");
    for (std::size_t k = 7; k <= 12; ++k) {
        auto sun = make_sun(k).graph;
        expect(iso(triangular_line_graph(make_wheel(k).graph).derived, sun),
               "T(W" + std::to_string(k) + ") is not S" + std::to_string(k));
        expect(iso(triangular_line_graph(make_squared_cycle(k).graph).derived, sun),
               "T(C" + std::to_string(k) + "^2) is not S" + std::to_string(k));
    }
    return "T(K4-e) = bowtie; T(W_k) = T(C_k^2) = S_k for k = 7..12";
}

std::string check_seven_sun(const BatteryConfig& config)
{
    auto s7 = brute_force_preimages(make_sun(7).graph.without_labels(), config.search);
    expect(s7.size() == 2, "S7 has " + std::to_string(s7.size()) + " preimage classes");
    bool wheel = false, square = false;
    for (const auto& w : s7) {
        expect(verify_certificate(w), "S7 witness does not verify");
        wheel = wheel || iso(w.candidate, make_wheel(7).graph);
        square = square || iso(w.candidate, make_squared_cycle(7).graph);
    }
    expect(wheel && square, "S7 classes are not W7 and C7^2");
    auto bowtie = make_bowtie().graph.without_labels();
    auto b = brute_force_preimages(bowtie, config.search);
    expect(b.size() == 1, "bowtie has " + std::to_string(b.size()) + " preimage classes");
    auto labeled = count_labeled_preimages(bowtie, config.search);
    expect(labeled == 2, "bowtie has " + std::to_string(labeled) + " labeled preimages");
    return "S7 classes {W7, C7^2}; bowtie 1 class, 2 labeled";
}

std::string check_binary_enforced_sun(const BatteryConfig& config)
{
    auto chain = make_binary_enforced_sun(12);
    auto found = template_solve(chain, template_options(config));
    std::vector<VertexId> core(24);
    std::iota(core.begin(), core.end(), 0U);
    std::ostringstream detail;
    detail << "assignments=" << found.size();
    bool wheel_ok = false, square_ok = false;
    for (const auto& a : found) {
        expect(verify_certificate(a.witness), "assignment witness does not verify");
        bool all_wheel = std::all_of(a.units.begin(), a.units.end(), [](const UnitChoice& u) {
            return u.choice == TemplateChoice::Wheel;
        });
        bool all_square = std::all_of(a.units.begin(), a.units.end(), [](const UnitChoice& u) {
            return u.choice == TemplateChoice::SquaredCycle;
        });
        auto core_candidate = restrict_preimage(a.witness, core).candidate;
        if (all_wheel) {
            std::set<VertexId> hubs;
            for (const auto& [name, piece] : chain.sub_gadgets) {
                auto r = restrict_preimage_mapped(a.witness, piece.vertices);
                const auto& g = r.witness.candidate;
                for (VertexId v = 0; v < g.vertex_count(); ++v)
                    if (g.degree(v) == 7)
                        hubs.insert(r.candidate_to_parent[v]);
            }
            wheel_ok = hubs.size() == 1 && iso(core_candidate, make_wheel(12).graph);
            detail << "; all-wheel: " << hubs.size() << " shared hub(s), 12-sun restriction "
                   << (iso(core_candidate, make_wheel(12).graph) ? "W12" : "not W12");
        } else if (all_square) {
            square_ok = iso(core_candidate, make_squared_cycle(12).graph);
            detail << "; all-squared-cycle: 12-sun restriction "
                   << (square_ok ? "C12^2" : "not C12^2");
        } else {
            detail << "; mixed assignment";
        }
    }
    if (!square_ok)
        detail << "; no all-squared-cycle assignment";
    expect(found.size() == 2 && wheel_ok && square_ok, detail.str());
    return detail.str();
}

std::string check_equal_not(const BatteryConfig& config)
{
    auto s = designate_attachments(make_sun(7));
    std::ostringstream detail;
    for (bool equal : {true, false}) {
        auto g = equal ? attach_equal(s, "EQUAL", s, "EQUAL") : attach_not(s, "NOT", s, "ROOT");
        auto found = template_solve(g, template_options(config));
        std::string label = equal ? "EQUAL" : "NOT";
        expect(found.size() == 2, label + " join has " + std::to_string(found.size()) + " assignments");
        for (const auto& a : found) {
            expect(verify_certificate(a.witness), label + " witness does not verify");
            auto ra = restrict_preimage(a.witness, g.sub_gadget("A").vertices).candidate;
            auto rb = restrict_preimage(a.witness, g.sub_gadget("B").vertices).candidate;
            expect(iso(ra, rb) == equal, label + " join restrictions have the wrong relation");
        }
        detail << (equal ? "" : "; ") << label << ": 2 assignments, restrictions "
               << (equal ? "isomorphic" : "non-isomorphic");
    }
    return detail.str();
}

std::string check_cluster(const BatteryConfig& config)
{
    auto cluster = make_variable_cluster(1, 1);
    auto found = template_solve(cluster, template_options(config));
    std::ostringstream detail;
    detail << "assignments=" << found.size();
    std::set<TemplateChoice> starts;
    for (const auto& a : found) {
        expect(verify_certificate(a.witness), "cluster witness does not verify");
        auto h0 = *a.choice_of("H0");
        for (std::size_t j = 1; j <= 2; ++j) {
            auto hj = *a.choice_of("H" + std::to_string(j));
            auto vj = *a.choice_of("V" + std::to_string(j));
            expect((hj != h0) == cluster_tap_is_negated(j), "wire parity broken at H" + std::to_string(j));
            expect(vj == hj, "V" + std::to_string(j) + " disagrees with H" + std::to_string(j));
        }
        starts.insert(h0);
        detail << "; H0=" << to_string(h0);
    }
    expect(found.size() == 2 && starts.size() == 2,
           detail.str() + "; expected one assignment per H0 template");
    return detail.str();
}

std::string check_appendix(const BatteryConfig& config)
{
    auto sun = make_sun(12);
    auto built = join_clause(sun, sun, sun);
    auto table = load_appendix_clause_gadget(config.appendix_dir);
    expect(same_labeled_graph(built.graph, table.graph), "join_clause differs from Table 1");
    const std::size_t expected_vertices[] = {27, 28, 29};
    std::ostringstream detail;
    detail << "Table 1 = join_clause";
    for (int wheels = 0; wheels <= 2; ++wheels) {
        auto w = load_appendix_preimage(wheels, config.appendix_dir);
        auto name = "Table " + std::to_string(wheels + 2);
        expect(verify_certificate(w), name + " does not verify");
        expect(w.candidate.vertex_count() == expected_vertices[wheels],
               name + " has " + std::to_string(w.candidate.vertex_count()) + " vertices");
        int counted = 0;
        for (const auto* part : {"S1", "S2", "S3"}) {
            auto r = restrict_preimage(w, table.sub_gadget(part).vertices).candidate;
            bool is_wheel = iso(r, make_wheel(12).graph);
            expect(is_wheel || iso(r, make_squared_cycle(12).graph),
                   name + " restriction to " + part + " is neither W12 nor C12^2");
            counted += is_wheel;
        }
        expect(counted == wheels, name + " has " + std::to_string(counted) + " wheels");
        detail << "; " << name << ": " << w.candidate.vertex_count() << " vertices, " << counted
               << " wheel(s)";
    }
    return detail.str();
}

std::string check_clause(const BatteryConfig& config)
{
    auto sun = make_sun(12);
    auto found = template_solve(join_clause(sun, sun, sun), template_options(config));
    std::set<std::string> patterns;
    for (const auto& a : found) {
        expect(verify_certificate(a.witness), "clause witness does not verify");
        patterns.insert(pattern_string({*a.choice_of("S1"), *a.choice_of("S2"), *a.choice_of("S3")}));
    }
    std::set<std::string> expected;
    for (int code = 0; code < 8; ++code) {
        std::string p;
        for (int l = 0; l < 3; ++l)
            p += (code >> (2 - l) & 1) ? 'C' : 'W';
        if (p != "WWW")
            expected.insert(p);
    }
    std::ostringstream detail;
    detail << "feasible patterns=" << patterns.size() << " (";
    bool first = true;
    for (const auto& p : patterns) {
        detail << (first ? "" : " ") << p;
        first = false;
    }
    detail << "); WWW " << (patterns.count("WWW") ? "feasible" : "infeasible");
    expect(patterns == expected, detail.str());
    return detail.str();
}

std::string check_reduction(const BatteryConfig& config)
{
    auto corpus = acceptance_corpus(config.corpus_size, config.corpus_seed);
    std::size_t agree = 0, sat_formulas = 0, sat_found = 0, unknown = 0;
    for (const auto& f : corpus) {
        bool truth = satisfiable_by_truth_table(f);
        sat_formulas += truth;
        auto r = compile(f);
        auto d = decide(r, config.decide);
        if (d.status == DecisionStatus::Unknown) {
            ++unknown;
            continue;
        }
        bool said_sat = d.status == DecisionStatus::Sat;
        if (said_sat) {
            ++sat_found;
            expect(d.witness && verify_certificate(*d.witness), "SAT witness does not verify");
            auto x = assignment_from_witness(r, *d.witness);
            expect(!first_unsatisfied(f, x), "extracted assignment is not satisfying");
        }
        agree += said_sat == truth;
    }
    std::ostringstream detail;
    detail << "agreement " << agree << "/" << corpus.size() << " (" << sat_formulas
           << " satisfiable by truth table, " << sat_found << " decided SAT";
    if (unknown)
        detail << ", " << unknown << " unknown";
    detail << ")";
    if (unknown && agree + unknown == corpus.size())
        throw BudgetExceeded(detail.str());
    expect(agree == corpus.size() && corpus.size() >= 50, detail.str());
    return detail.str();
}

std::string check_unique_triangles(const BatteryConfig& config)
{
    auto corpus = acceptance_corpus(config.corpus_size, config.corpus_seed);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        expect(every_edge_in_unique_triangle(compile(corpus[i]).graph.graph),
               "formula " + std::to_string(i) + " compiles to a graph with a shared edge");
    return std::to_string(corpus.size()) + " compiled graphs, every edge in a unique triangle";
}

std::string check_properties(const BatteryConfig& config)
{
    std::size_t restrictions = 0;
    auto check_restrictions = [&](const Graph& g, std::mt19937& rng) {
        auto w = operator_witness(g);
        const auto& h = w.target;
        std::size_t n = h.vertex_count();
        auto try_subset = [&](const std::vector<VertexId>& subset) {
            if (!is_triangle_induced(h, subset))
                return;
            expect(verify_certificate(restrict_preimage(w, subset)),
                   "restriction of an operator witness does not certify");
            ++restrictions;
        };
        if (n <= 12) {
            for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
                std::vector<VertexId> subset;
                for (VertexId v = 0; v < n; ++v)
                    if (mask >> v & 1U)
                        subset.push_back(v);
                try_subset(subset);
            }
        } else {
            std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
            for (int s = 0; s < 64; ++s) {
                std::vector<VertexId> seed;
                for (int i = 0; i <= s % 4; ++i)
                    seed.push_back(pick(rng));
                std::sort(seed.begin(), seed.end());
                seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
                try_subset(triangle_closure(h, seed));
            }
        }
    };

    std::mt19937 rng(config.corpus_seed);
    auto small = graphs_up_to_edges(5);
    for (const auto& g : small)
        check_restrictions(g, rng);
    for (std::size_t i = 0; i < config.random_closure_graphs; ++i) {
        std::size_t n = 1 + rng() % 7;
        std::bernoulli_distribution coin(0.3 + 0.4 * (rng() % 100) / 100.0);
        std::vector<Edge> edges;
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b)
                if (coin(rng))
                    edges.emplace_back(a, b);
        check_restrictions(Graph::build(n, std::span<const Edge>(edges)), rng);
    }

    for (const auto& g : small) {
        auto found = brute_force_preimages(triangular_line_graph(g).derived, config.search);
        auto key = canonical_form(g);
        expect(std::any_of(found.begin(), found.end(),
                           [&](const PreimageWitness& w) { return canonical_form(w.candidate) == key; }),
               "brute force misses the class of a graph with " + std::to_string(g.edge_count())
                   + " edges");
    }
    return std::to_string(restrictions) + " restrictions certified over "
           + std::to_string(small.size() + config.random_closure_graphs) + " graphs; "
           + std::to_string(small.size()) + " operator images recovered";
}

struct Check {
    int id;
    const char* name;
    /// Wall-clock allowance; zero means none.
    double limit_seconds;
    std::string (*run)(const BatteryConfig&);
};

const Check checks[] = {
    {1, "operator-correctness", 1, check_operator},
    {2, "seven-sun-preimages", 600, check_seven_sun},
    {3, "binary-enforced-sun", 60, check_binary_enforced_sun},
    {4, "equal-not-joins", 60, check_equal_not},
    {5, "variable-cluster", 300, check_cluster},
    {6, "appendix-integrity", 60, check_appendix},
    {7, "clause-patterns", 600, check_clause},
    {8, "reduction-round-trip", 1800, check_reduction},
    {9, "unique-triangles", 0, check_unique_triangles},
    {10, "property-suites", 0, check_properties},
};

} // namespace

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass:
        return "PASS";
    case CheckStatus::Fail:
        return "FAIL";
    case CheckStatus::Unknown:
        return "UNKNOWN";
    case CheckStatus::Error:
        break;
    }
    return "ERROR";
}

std::vector<CnfFormula> acceptance_corpus(std::size_t size, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    std::vector<CnfFormula> out;
    for (std::size_t i = 0; i < size; ++i) {
        CnfFormula f;
        f.variable_count = 3 + rng() % 2;
        std::size_t m = 1 + rng() % 3;
        std::vector<std::size_t> vars(f.variable_count);
        std::iota(vars.begin(), vars.end(), std::size_t{1});
        for (std::size_t j = 0; j < m; ++j) {
            std::shuffle(vars.begin(), vars.end(), rng);
            Clause c;
            for (std::size_t l = 0; l < 3; ++l)
                c[l] = {vars[l], (rng() & 1U) != 0};
            f.clauses.push_back(c);
        }
        out.push_back(std::move(f));
    }
    CnfFormula all{3, {}};
    for (int code = 0; code < 8; ++code)
        all.clauses.push_back({Literal{1, (code & 4) != 0}, Literal{2, (code & 2) != 0},
                               Literal{3, (code & 1) != 0}});
    out.push_back(std::move(all));
    return out;
}

bool satisfiable_by_truth_table(const CnfFormula& f)
{
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << f.variable_count); ++code) {
        Assignment x(f.variable_count);
        for (std::size_t i = 0; i < f.variable_count; ++i)
            x[i] = code >> i & 1U;
        if (!first_unsatisfied(f, x))
            return true;
    }
    return false;
}

std::vector<CheckResult> run_battery(const BatteryConfig& config,
                                     const std::function<void(const CheckResult&)>& on_result)
{
    std::vector<CheckResult> results;
    for (const auto& check : checks) {
        if (!config.only.empty()
            && std::find(config.only.begin(), config.only.end(), check.id) == config.only.end())
            continue;
        CheckResult r;
        r.id = check.id;
        r.name = check.name;
        auto start = std::chrono::steady_clock::now();
        try {
            r.detail = check.run(config);
            r.status = CheckStatus::Pass;
        } catch (const Failed& f) {
            r.status = CheckStatus::Fail;
            r.detail = f.why;
        } catch (const BudgetExceeded& e) {
            r.status = CheckStatus::Unknown;
            r.detail = e.what();
        } catch (const std::exception& e) {
            r.status = CheckStatus::Error;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.limit_seconds = check.limit_seconds;
        if (r.status == CheckStatus::Pass && r.limit_seconds > 0 && r.seconds > r.limit_seconds) {
            r.status = CheckStatus::Fail;
            r.detail += "; exceeded the " + std::to_string(static_cast<int>(r.limit_seconds)) + " s allowance";
        }
        if (on_result)
            on_result(r);
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const CheckResult& r)
{
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.2f", r.seconds);
    return "[" + to_string(r.status) + "] " + std::to_string(r.id) + " " + r.name + ": " + r.detail
           + " (" + seconds + " s)";
}

int battery_exit_code(const std::vector<CheckResult>& results)
{
    auto any = [&](CheckStatus s) {
        return std::any_of(results.begin(), results.end(),
                           [s](const CheckResult& r) { return r.status == s; });
    };
    if (any(CheckStatus::Error))
        return 4;
    if (any(CheckStatus::Fail))
        return 1;
    if (any(CheckStatus::Unknown))
        return 3;
    return 0;
}

} // namespace trilin
