#include <doctest.h>

#include "test_support.hpp"

#include <trilin/appendix.hpp>
#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/search.hpp>
#include <trilin/template_solver.hpp>

using namespace trilin;
using namespace trilin::testing;

namespace {

bool iso(const Graph& a, const Graph& b)
{
    return find_isomorphism(a.without_labels(), b.without_labels()).has_value();
}

std::vector<TemplateChoice> choices(const TemplateAssignment& a, const std::vector<std::string>& units)
{
    std::vector<TemplateChoice> out;
    for (const auto& u : units)
        out.push_back(*a.choice_of(u));
    return out;
}

constexpr auto W = TemplateChoice::Wheel;
constexpr auto C = TemplateChoice::SquaredCycle;

} // namespace

TEST_CASE("seven_sun_templates_match_brute_force")
{
    auto sun = make_sun(7);
    auto found = template_solve(sun);
    REQUIRE(found.size() == 2);
    CHECK(found[0].units.size() == 1);
    CHECK(found[0].units[0].choice == W);
    CHECK(found[1].units[0].choice == C);
    CHECK(iso(found[0].witness.candidate, make_wheel(7).graph));
    CHECK(iso(found[1].witness.candidate, make_squared_cycle(7).graph));

    // Same labeled preimages as the exhaustive search.
    std::set<LeFamily, bool (*)(const LeFamily&, const LeFamily&)> brute(
        [](const LeFamily& a, const LeFamily& b) { return a.members < b.members; });
    SearchLimits limits;
    for (const auto& w : brute_force_preimages(sun.graph, limits))
        brute.insert(canonical_le_family(le_family_from_preimage(w)));
    for (const auto& a : found) {
        CHECK(verify_certificate(a.witness));
        CHECK(brute.count(canonical_le_family(le_family_from_preimage(a.witness))) == 1);
    }
    CHECK(count_labeled_preimages(sun.graph, limits) == found.size());
}

TEST_CASE("twelve_sun_and_clause_gadget")
{
    auto s12 = template_solve(make_sun(12));
    REQUIRE(s12.size() == 2);

    auto clause = join_clause(make_sun(12), make_sun(12), make_sun(12));
    auto found = template_solve(clause);
    // Every pattern except all three wheels.
    CHECK(found.size() == 7);
    std::set<std::vector<TemplateChoice>> patterns;
    for (const auto& a : found) {
        CHECK(verify_certificate(a.witness));
        patterns.insert(choices(a, {"S1", "S2", "S3"}));
    }
    CHECK(patterns.size() == 7);
    CHECK(patterns.count({W, W, W}) == 0);

    // The appendix table carries the same registry.
    auto table = load_appendix_clause_gadget();
    CHECK(template_solve(table).size() == 7);
}

namespace {

/// The all-squared-cycle gluing for a binary-enforced k-sun, built by hand:
/// C_k^2 on c_0..c_{k-1} with sun cycle vertex v_i = c_i c_{i+1}, plus one
/// fan hub d_i per chain.
PreimageWitness squared_cycle_gluing(std::size_t k)
{
    auto target = make_binary_enforced_sun(k);
    const auto& g = target.graph;
    auto c = [k](std::size_t i) { return static_cast<VertexId>(i % k); };
    auto v = [&](std::size_t i) { return static_cast<VertexId>(2 * (i % k)); };
    auto apex = [&](std::size_t i) { return static_cast<VertexId>(2 * (i % k) + 1); };
    std::vector<std::pair<Edge, VertexId>> map;
    for (std::size_t i = 0; i < k; ++i) {
        map.push_back({{c(i), c(i + 1)}, v(i)});
        map.push_back({{c(i), c(i + 2)}, apex(i)});
        auto d = static_cast<VertexId>(k + i);
        const auto& chain = target.role("chain" + std::to_string(i + 1));
        VertexId w1 = chain[0], w2 = chain[1], a1 = chain[2], a2 = chain[3], a3 = chain[4];
        map.push_back({{c(i + 5), d}, w1});
        map.push_back({{d, c(i)}, w2});
        map.push_back({{c(i + 4), d}, a1});
        map.push_back({{c(i), c(i + 5)}, a2});
        map.push_back({{d, c(i + 1)}, a3});
    }
    std::vector<Edge> edges;
    for (const auto& [e, t] : map)
        edges.push_back(e);
    PreimageWitness w;
    w.target = g;
    w.candidate = Graph::build(2 * k, std::span<const Edge>(edges));
    REQUIRE(w.candidate.edge_count() == g.vertex_count());
    w.edge_to_vertex.assign(g.vertex_count(), 0);
    for (const auto& [e, t] : map)
        w.edge_to_vertex[*w.candidate.edge_index(e.u, e.v)] = t;
    return w;
}

} // namespace

TEST_CASE("binary_enforced_sun_templates")
{
    // The hand-built gluing is an independent oracle for the squared-cycle
    // option: it certifies exactly when the solver reports two assignments.
    for (std::size_t k : {9, 12, 13, 14}) {
        auto found = template_solve(make_binary_enforced_sun(k));
        bool glued = verify_certificate(squared_cycle_gluing(k));
        CHECK(found.size() == (glued ? 2U : 1U));
        REQUIRE_FALSE(found.empty());
        CHECK(found[0].units.front().choice == W);
    }
    // For k = 12 the chords c_i c_{i+5} close extra triangles with c_{i+7}.
    CHECK_FALSE(verify_certificate(squared_cycle_gluing(12)));
    CHECK(verify_certificate(squared_cycle_gluing(13)));

    auto chain = make_binary_enforced_sun(12);
    auto found = template_solve(chain);
    REQUIRE(found.size() == 1);
    const auto& wheel = found[0];
    CHECK(verify_certificate(wheel.witness));
    for (const auto& u : wheel.units)
        CHECK(u.choice == W);
    std::vector<VertexId> core(24);
    std::iota(core.begin(), core.end(), 0U);
    CHECK(iso(restrict_preimage(wheel.witness, core).candidate, make_wheel(12).graph));

    auto large = make_large_variable_gadget(1, 1);
    CHECK(template_solve(large).size() == 1);
}

TEST_CASE("equal_and_not_joins_couple_choices")
{
    auto s = designate_attachments(make_sun(7));
    auto eq = template_solve(attach_equal(s, "EQUAL", s, "EQUAL"));
    REQUIRE(eq.size() == 2);
    for (const auto& a : eq)
        CHECK(*a.choice_of("A") == *a.choice_of("B"));

    auto ne = template_solve(attach_not(s, "NOT", s, "ROOT"));
    REQUIRE(ne.size() == 2);
    for (const auto& a : ne)
        CHECK(*a.choice_of("A") != *a.choice_of("B"));

    auto wire = template_solve(make_wire(3));
    REQUIRE(wire.size() == 2);
    for (const auto& a : wire)
        for (std::size_t i = 1; i <= 3; ++i)
            CHECK(*a.choice_of("H" + std::to_string(i)) != *a.choice_of("H" + std::to_string(i - 1)));
}

TEST_CASE("variable_cluster_assignments")
{
    // V_1 would need the squared-cycle template of the 12-sun chain, which
    // does not exist, so the cluster has no preimage at all.
    CHECK(template_solve(make_variable_cluster(1, 1)).empty());

    // Without the V gadgets the wire alone keeps its two parity patterns.
    auto wire = template_solve(make_wire(2));
    REQUIRE(wire.size() == 2);
    for (const auto& a : wire)
        for (std::size_t j = 1; j <= 2; ++j)
            CHECK((*a.choice_of("H" + std::to_string(j)) != *a.choice_of("H0"))
                  == cluster_tap_is_negated(j));
}

TEST_CASE("forced_choices_and_budgets")
{
    TemplateOptions forced;
    forced.forced["sun7"] = C;
    auto one = template_solve(make_sun(7), forced);
    REQUIRE(one.size() == 1);
    CHECK(one[0].units[0].choice == C);

    TemplateOptions unknown;
    unknown.forced["nope"] = W;
    CHECK_THROWS_AS(template_solve(make_sun(7), unknown), StructuralError);

    auto s = designate_attachments(make_sun(7));
    TemplateOptions contradiction;
    contradiction.forced["A"] = W;
    contradiction.forced["B"] = C;
    CHECK(template_solve(attach_equal(s, "EQUAL", s, "EQUAL"), contradiction).empty());

    TemplateOptions tight;
    tight.node_budget = 3;
    CHECK_THROWS_AS(template_solve(make_wire(3), tight), BudgetExceeded);

    CHECK(to_string(W) == "wheel");
    CHECK(to_string(C) == "squared-cycle");
}

TEST_CASE("structural_prechecks")
{
    CHECK_THROWS_AS(template_solve(make_bowtie()), StructuralError);

    auto s = designate_attachments(make_sun(7));
    auto eq = attach_equal(s, "EQUAL", s, "EQUAL");
    auto missing = eq;
    missing.sub_gadgets.erase("B");
    CHECK_THROWS_AS(template_solve(missing), StructuralError);

    auto truncated = eq;
    truncated.sub_gadgets.at("A").vertices.pop_back();
    CHECK_THROWS_AS(template_solve(truncated), StructuralError);

    CHECK(template_units(eq) == std::vector<std::string>{"A", "B"});
}
