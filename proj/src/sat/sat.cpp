#include <trilin/error.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/sat.hpp>
#include <trilin/template_solver.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace trilin {

namespace {

bool literal_value(const Literal& l, const Assignment& x)
{
    return x.at(l.variable - 1) != l.negated;
}

long long parse_int(std::string_view token, std::size_t line)
{
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("expected an integer, got '" + std::string(token) + "'", line);
    return value;
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace

CnfFormula parse_dimacs(std::string_view text)
{
    CnfFormula f;
    bool header = false;
    std::size_t declared = 0;
    std::vector<Literal> pending;
    std::size_t line_no = 0;
    std::size_t pending_line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == 'c')
            continue;
        if (tokens[0] == "%")
            break;
        if (tokens[0] == "p") {
            if (header)
                throw ParseError("second header line", line_no);
            if (tokens.size() != 4 || tokens[1] != "cnf")
                throw ParseError("header must read 'p cnf <variables> <clauses>'", line_no);
            auto n = parse_int(tokens[2], line_no);
            auto m = parse_int(tokens[3], line_no);
            if (n < 0 || m < 0)
                throw ParseError("negative count in header", line_no);
            f.variable_count = static_cast<std::size_t>(n);
            declared = static_cast<std::size_t>(m);
            header = true;
            continue;
        }
        if (!header)
            throw ParseError("clause before the 'p cnf' header", line_no);
        for (auto token : tokens) {
            auto value = parse_int(token, line_no);
            if (pending.empty())
                pending_line = line_no;
            if (value != 0) {
                auto var = static_cast<std::size_t>(value < 0 ? -value : value);
                if (var > f.variable_count)
                    throw ParseError("variable " + std::to_string(var) + " exceeds the header's "
                                         + std::to_string(f.variable_count),
                                     line_no);
                pending.push_back({var, value < 0});
                continue;
            }
            if (pending.size() != 3)
                throw ParseError("clause has " + std::to_string(pending.size())
                                     + " literals; only 3-CNF is supported",
                                 pending_line);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = a + 1; b < 3; ++b)
                    if (pending[a].variable == pending[b].variable)
                        throw ParseError("variable " + std::to_string(pending[a].variable)
                                             + " repeated within a clause",
                                         pending_line);
            f.clauses.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
        }
    }
    if (!header)
        throw ParseError("missing 'p cnf' header", 0);
    if (!pending.empty())
        throw ParseError("last clause is not terminated by 0", pending_line);
    if (f.clauses.size() != declared)
        throw ParseError("header declares " + std::to_string(declared) + " clauses, found "
                             + std::to_string(f.clauses.size()),
                         0);
    return f;
}

std::string to_dimacs(const CnfFormula& f)
{
    std::ostringstream out;
    out << "p cnf " << f.variable_count << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (const auto& l : c)
            out << (l.negated ? "-" : "") << l.variable << ' ';
        out << "0\n";
    }
    return out.str();
}

std::optional<std::size_t> first_unsatisfied(const CnfFormula& f, const Assignment& x)
{
    if (x.size() != f.variable_count)
        throw Error("assignment has " + std::to_string(x.size()) + " values for "
                    + std::to_string(f.variable_count) + " variables");
    for (std::size_t j = 0; j < f.clauses.size(); ++j) {
        const auto& c = f.clauses[j];
        if (std::none_of(c.begin(), c.end(), [&](const Literal& l) { return literal_value(l, x); }))
            return j;
    }
    return std::nullopt;
}

std::string variable_gadget_name(std::size_t variable, std::size_t k)
{
    return "x" + std::to_string(variable) + "/V" + std::to_string(k);
}

std::string wire_start_name(std::size_t variable) { return "x" + std::to_string(variable) + "/H0"; }

ReductionOutput compile(const CnfFormula& f)
{
    if (f.clauses.empty())
        throw StructuralError("formula has no clauses; the reduction needs m >= 1");
    std::size_t m = f.clauses.size();
    GadgetComposer c;
    std::vector<std::size_t> cluster;
    for (std::size_t i = 1; i <= f.variable_count; ++i)
        cluster.push_back(c.add("x" + std::to_string(i), make_variable_cluster(i, m)));

    ReductionOutput r;
    r.formula = f;
    std::set<std::string> used;
    for (std::size_t j = 1; j <= m; ++j) {
        std::array<ClauseLeg, 3> legs;
        std::array<std::string, 3> names;
        for (std::size_t l = 0; l < 3; ++l) {
            const auto& lit = f.clauses[j - 1][l];
            if (lit.variable == 0 || lit.variable > f.variable_count)
                throw StructuralError("literal refers to variable " + std::to_string(lit.variable));
            std::size_t k = lit.negated ? 2 * j - 1 : 2 * j;
            legs[l] = {cluster[lit.variable - 1], "V" + std::to_string(k) + "/"};
            names[l] = variable_gadget_name(lit.variable, k);
            if (!used.insert(names[l]).second)
                throw Error("internal: large variable gadget " + names[l] + " used twice");
        }
        compose_clause(c, legs);
        r.clause_legs.push_back(names);
    }
    r.graph = c.finish("formula");
    r.graph.attributes["n"] = std::to_string(f.variable_count);
    r.graph.attributes["m"] = std::to_string(m);
    return r;
}

PreimageWitness witness_from_assignment(const ReductionOutput& r, const Assignment& x)
{
    if (auto j = first_unsatisfied(r.formula, x))
        throw UnsatisfiedClause("assignment falsifies clause " + std::to_string(*j + 1), *j + 1);
    TemplateOptions options;
    for (std::size_t i = 1; i <= r.formula.variable_count; ++i)
        options.forced[wire_start_name(i)] = x[i - 1] ? TemplateChoice::SquaredCycle
                                                      : TemplateChoice::Wheel;
    auto found = template_solve(r.graph, options);
    if (found.empty())
        throw StructuralError("no template assignment of the compiled graph extends this "
                              "variable assignment");
    return std::move(found.front().witness);
}

Assignment assignment_from_witness(const ReductionOutput& r, const PreimageWitness& w)
{
    if (!(w.target.without_labels() == r.graph.graph.without_labels()))
        throw CertificateError("witness target is not the compiled graph");
    if (!verify_certificate(w))
        throw CertificateError("witness does not verify against the compiled graph");
    auto wheel = make_wheel(7).graph.without_labels();
    auto square = make_squared_cycle(7).graph.without_labels();
    Assignment x(r.formula.variable_count);
    for (std::size_t i = 1; i <= r.formula.variable_count; ++i) {
        auto restricted = restrict_preimage(w, r.graph.sub_gadget(wire_start_name(i)).vertices);
        auto g = restricted.candidate.without_labels();
        if (find_isomorphism(g, square))
            x[i - 1] = true;
        else if (find_isomorphism(g, wheel))
            x[i - 1] = false;
        else
            throw CertificateError("restriction to " + wire_start_name(i)
                                   + " is neither W7 nor C7^2");
    }
    if (auto j = first_unsatisfied(r.formula, x))
        throw CertificateError("extracted assignment falsifies clause " + std::to_string(*j + 1));
    return x;
}

const std::vector<std::array<bool, 3>>& clause_feasible_patterns()
{
    static const std::vector<std::array<bool, 3>> patterns = [] {
        auto sun = make_sun(12);
        std::set<std::array<bool, 3>> seen;
        for (const auto& a : template_solve(join_clause(sun, sun, sun)))
            seen.insert({*a.choice_of("S1") == TemplateChoice::Wheel,
                         *a.choice_of("S2") == TemplateChoice::Wheel,
                         *a.choice_of("S3") == TemplateChoice::Wheel});
        return std::vector<std::array<bool, 3>>(seen.begin(), seen.end());
    }();
    return patterns;
}

std::string to_string(DecisionStatus s)
{
    switch (s) {
    case DecisionStatus::Sat:
        return "SAT";
    case DecisionStatus::Unsat:
        return "UNSAT";
    case DecisionStatus::Unknown:
        break;
    }
    return "UNKNOWN";
}

Decision decide(const CnfFormula& f, const DecideLimits& limits)
{
    if (f.variable_count > limits.max_vars)
        throw GuardExceeded("formula has " + std::to_string(f.variable_count)
                            + " variables; decide enumerates 2^n assignments and refuses above "
                            + std::to_string(limits.max_vars));
    return decide(compile(f), limits);
}

Decision decide(const ReductionOutput& r, const DecideLimits& limits)
{
    const auto& f = r.formula;
    std::size_t n = f.variable_count;
    if (n > limits.max_vars)
        throw GuardExceeded("formula has " + std::to_string(n)
                            + " variables; decide enumerates 2^n assignments and refuses above "
                            + std::to_string(limits.max_vars));
    const auto& table = clause_feasible_patterns();
    std::set<std::array<bool, 3>> feasible(table.begin(), table.end());

    auto start = std::chrono::steady_clock::now();
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> out_of_budget{false};
    std::string budget_reason;
    std::mutex reason_mutex;
    auto run_out = [&](const std::string& why) {
        std::lock_guard lock(reason_mutex);
        if (!out_of_budget.exchange(true))
            budget_reason = why;
    };
    auto charge = [&](std::uint64_t amount) {
        auto total = nodes.fetch_add(amount) + amount;
        if (limits.node_budget && total > limits.node_budget)
            run_out("node budget exhausted");
        if (limits.time_budget.count() > 0
            && std::chrono::steady_clock::now() - start > limits.time_budget)
            run_out("time budget exhausted");
        return !out_of_budget.load();
    };

    auto assignment_of = [n](std::uint64_t code) {
        Assignment x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = (code >> (n - 1 - i)) & 1U;
        return x;
    };
    // Wheel on a leg exactly when its literal is false.
    auto passes_table = [&](const Assignment& x) {
        for (const auto& c : f.clauses) {
            std::array<bool, 3> pattern{};
            for (std::size_t l = 0; l < 3; ++l)
                pattern[l] = !literal_value(c[l], x);
            if (!feasible.count(pattern))
                return false;
        }
        return true;
    };
    auto attempt = [&](const Assignment& x) -> std::optional<PreimageWitness> {
        if (!charge(1) || !passes_table(x))
            return std::nullopt;
        if (!charge(1))
            return std::nullopt;
        try {
            auto w = witness_from_assignment(r, x);
            if (verify_certificate(w))
                return w;
        } catch (const StructuralError&) {
        } catch (const UnsatisfiedClause&) {
        }
        return std::nullopt;
    };

    Decision d;
    std::uint64_t total = std::uint64_t{1} << n;
    unsigned workers = std::max(1U, limits.workers);
    for (std::uint64_t base = 0; base < total; base += workers) {
        std::uint64_t block = std::min<std::uint64_t>(workers, total - base);
        std::vector<std::optional<PreimageWitness>> found(block);
        if (block == 1) {
            found[0] = attempt(assignment_of(base));
        } else {
            std::vector<std::thread> pool;
            for (std::uint64_t i = 0; i < block; ++i)
                pool.emplace_back([&, i] { found[i] = attempt(assignment_of(base + i)); });
            for (auto& t : pool)
                t.join();
        }
        for (std::uint64_t i = 0; i < block; ++i)
            if (found[i]) {
                d.status = DecisionStatus::Sat;
                d.assignment = assignment_of(base + i);
                d.witness = std::move(found[i]);
                return d;
            }
        if (out_of_budget) {
            d.status = DecisionStatus::Unknown;
            d.reason = budget_reason;
            return d;
        }
    }
    d.status = DecisionStatus::Unsat;
    return d;
}

} // namespace trilin
