#include <doctest.h>

#include "test_support.hpp"

#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/tlg.hpp>

#include <set>

using namespace trilin;
using namespace trilin::testing;

namespace {

Graph double_triangle() { return Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}}); }

bool share_endpoint(const Edge& a, const Edge& b)
{
    return a.touches(b.u) || a.touches(b.v);
}

/// Adjacency straight from the definition, pair by pair.
bool tlg_adjacent(const Graph& g, const Edge& a, const Edge& b)
{
    if (a == b || !share_endpoint(a, b))
        return false;
    VertexId shared = a.touches(b.u) ? b.u : b.v;
    return g.has_edge(a.other(shared), b.other(shared));
}

std::vector<std::size_t> sorted_sizes(const LeFamily& f)
{
    std::vector<std::size_t> s;
    for (const auto& m : f.members)
        s.push_back(m.size());
    std::sort(s.begin(), s.end());
    return s;
}

PreimageWitness self_witness(const Graph& g)
{
    auto t = triangular_line_graph(g);
    return {t.derived, g, t.edge_to_vertex};
}

} // namespace

TEST_CASE("triangular_line_graph_small_cases")
{
    auto k3 = triangular_line_graph(complete_graph(3));
    CHECK(k3.derived == complete_graph(3));

    auto p3 = triangular_line_graph(path_graph(3));
    CHECK(p3.derived.vertex_count() == 2);
    CHECK(p3.derived.edge_count() == 0);

    auto dt = triangular_line_graph(double_triangle());
    CHECK(dt.derived.vertex_count() == 5);
    CHECK(dt.derived.edge_count() == 6);
    CHECK(find_isomorphism(dt.derived, make_bowtie().graph).has_value());
    CHECK(dt.edge_to_vertex.size() == 5);

    auto sun7 = make_sun(7).graph;
    CHECK(find_isomorphism(triangular_line_graph(make_wheel(7).graph).derived, sun7));
    CHECK(find_isomorphism(triangular_line_graph(make_squared_cycle(7).graph).derived, sun7));

    // Isolated vertices of the source are ignored.
    auto padded = Graph::build(6, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(triangular_line_graph(padded).derived == complete_graph(3));
}

TEST_CASE("triangular_line_graph_matches_definition")
{
    std::mt19937 rng(5);
    for (int round = 0; round < 100; ++round) {
        auto g = random_graph(rng, 7, 0.5);
        auto t = triangular_line_graph(g);
        REQUIRE(t.derived.vertex_count() == g.edge_count());
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            for (std::size_t j = i + 1; j < g.edge_count(); ++j)
                CHECK(t.derived.has_edge(t.edge_to_vertex[i], t.edge_to_vertex[j]) ==
                      tlg_adjacent(g, g.edges()[i], g.edges()[j]));
    }
}

TEST_CASE("line_graph_and_gallai_graph")
{
    auto lp3 = line_graph(path_graph(3)).derived;
    CHECK(lp3 == complete_graph(2));
    CHECK(line_graph(complete_graph(3)).derived == complete_graph(3));

    // L(K4 - e) has the six bowtie edges plus the pairs 01-13 and 02-23,
    // which meet at a vertex without closing a triangle.
    auto dt = double_triangle();
    auto l = line_graph(dt).derived;
    auto t = triangular_line_graph(dt).derived;
    CHECK(l.edge_count() == 8);
    CHECK(t.edge_count() == 6);
    for (const auto& e : t.edges())
        CHECK(l.has_edge(e.u, e.v));

    auto gk3 = gallai_graph(complete_graph(3));
    CHECK(gk3.vertex_count() == 3);
    CHECK(gk3.edge_count() == 0);
    CHECK(gallai_graph(path_graph(3)) == complete_graph(2));

    auto gamma = gallai_graph(dt);
    CHECK(gamma.vertex_count() == 5);
    std::set<Edge> expected;
    for (const auto& e : l.edges())
        if (!t.has_edge(e.u, e.v))
            expected.insert(e);
    CHECK(std::set<Edge>(gamma.edges().begin(), gamma.edges().end()) == expected);
}

TEST_CASE("line_graph_decomposes_into_t_and_gamma")
{
    std::mt19937 rng(99);
    for (int round = 0; round < 100; ++round) {
        auto g = random_graph(rng, 1 + round % 8, 0.5);
        auto l = line_graph(g).derived;
        auto t = triangular_line_graph(g).derived;
        auto gamma = gallai_graph(g);
        for (const auto& e : t.edges())
            CHECK(l.has_edge(e.u, e.v));
        for (const auto& e : gamma.edges()) {
            CHECK(l.has_edge(e.u, e.v));
            CHECK_FALSE(t.has_edge(e.u, e.v));
        }
        CHECK(l.edge_count() == t.edge_count() + gamma.edge_count());
    }
}

TEST_CASE("verify_certificate")
{
    auto dt = double_triangle();
    auto bowtie = make_bowtie().graph;
    // Edges of K4-e in index order: 01, 02, 12, 13, 23. The shared edge 12
    // is the bowtie center; triangle 012 becomes one wing, 123 the other.
    PreimageWitness w{bowtie, dt, {1, 2, 0, 3, 4}};
    CHECK(verify_certificate(w));

    auto bad = w;
    std::swap(bad.edge_to_vertex[0], bad.edge_to_vertex[2]);
    CHECK_FALSE(verify_certificate(bad));

    auto not_bijective = w;
    not_bijective.edge_to_vertex[0] = not_bijective.edge_to_vertex[1];
    CHECK_THROWS_AS(verify_certificate(not_bijective), CertificateError);
    auto short_map = w;
    short_map.edge_to_vertex.pop_back();
    CHECK_THROWS_AS(verify_certificate(short_map), CertificateError);
    auto out_of_range = w;
    out_of_range.edge_to_vertex[0] = 7;
    CHECK_THROWS_AS(verify_certificate(out_of_range), CertificateError);
}

TEST_CASE("operator_output_always_certifies_and_transpositions_are_caught")
{
    std::mt19937 rng(31);
    for (int round = 0; round < 60; ++round) {
        auto g = random_graph(rng, 7, 0.5);
        auto w = self_witness(g);
        CHECK(verify_certificate(w));
        for (std::size_t i = 0; i < w.edge_to_vertex.size(); ++i)
            for (std::size_t j = i + 1; j < w.edge_to_vertex.size(); ++j) {
                auto swapped = w;
                std::swap(swapped.edge_to_vertex[i], swapped.edge_to_vertex[j]);
                // The swap changes some adjacency unless the two target
                // vertices have the same neighbourhood outside each other.
                bool changes = false;
                auto a = w.edge_to_vertex[i], b = w.edge_to_vertex[j];
                for (VertexId x = 0; x < w.target.vertex_count(); ++x)
                    if (x != a && x != b && w.target.has_edge(a, x) != w.target.has_edge(b, x))
                        changes = true;
                CHECK(verify_certificate(swapped) == !changes);
            }
    }
}

TEST_CASE("is_triangle_induced")
{
    auto besun = make_binary_enforced_sun(12);
    for (const auto& [name, piece] : besun.sub_gadgets)
        CHECK(is_triangle_induced(besun.graph, piece.vertices));

    std::vector<VertexId> wing{0, 1, 2};
    CHECK(is_triangle_induced(make_bowtie().graph, wing));
    CHECK_FALSE(is_triangle_induced(complete_graph(4), wing));

    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        auto g = random_graph(rng, 7, 0.5);
        std::vector<VertexId> all{0, 1, 2, 3, 4, 5, 6};
        CHECK(is_triangle_induced(g, all));
        CHECK(is_triangle_induced(g, std::span<const VertexId>{}));
    }
}

TEST_CASE("restrict_preimage")
{
    auto w7 = make_wheel(7).graph;
    auto full = self_witness(w7);
    std::vector<VertexId> all(full.target.vertex_count());
    std::iota(all.begin(), all.end(), 0U);
    auto same = restrict_preimage(full, all);
    CHECK(verify_certificate(same));
    CHECK(same.candidate.edge_count() == w7.edge_count());
    CHECK(find_isomorphism(same.candidate, w7.without_labels()).has_value());

    // A single triangle of the sun (the image of one wheel triangle).
    auto tri = enumerate_triangles(full.target).front();
    std::vector<VertexId> one(tri.vertices.begin(), tri.vertices.end());
    auto piece = restrict_preimage(full, one);
    CHECK(verify_certificate(piece));
    CHECK(piece.candidate.vertex_count() == 3);

    std::vector<VertexId> open_edge{tri.vertices[0], tri.vertices[1]};
    CHECK_THROWS_AS(restrict_preimage(full, open_edge), StructuralError);
    auto broken = full;
    std::swap(broken.edge_to_vertex[0], broken.edge_to_vertex[5]);
    if (!verify_certificate(broken))
        CHECK_THROWS_AS(restrict_preimage(broken, all), CertificateError);
}

TEST_CASE("closure_under_restriction")
{
    // Every triangle-induced subset of T(G) restricts to a certified witness.
    std::mt19937 rng(77);
    for (int round = 0; round < 40; ++round) {
        auto g = random_graph(rng, 6, 0.5);
        auto w = self_witness(g);
        auto n = w.target.vertex_count();
        if (n > 12)
            continue;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<VertexId> subset;
            for (VertexId v = 0; v < n; ++v)
                if (mask & (1u << v))
                    subset.push_back(v);
            if (!is_triangle_induced(w.target, subset))
                continue;
            auto r = restrict_preimage(w, subset);
            CHECK(verify_certificate(r));
        }
    }
}

TEST_CASE("le_family_from_preimage")
{
    auto dt = double_triangle();
    PreimageWitness w{make_bowtie().graph, dt, {1, 2, 0, 3, 4}};
    auto f = le_family_from_preimage(w);
    CHECK(sorted_sizes(f) == std::vector<std::size_t>{2, 2, 3, 3});
    CHECK(check_le_family(w.target, f));

    auto k3 = le_family_from_preimage(self_witness(complete_graph(3)));
    CHECK(sorted_sizes(k3) == std::vector<std::size_t>{2, 2, 2});

    auto s7 = le_family_from_preimage(self_witness(make_wheel(7).graph));
    CHECK(sorted_sizes(s7) == std::vector<std::size_t>{3, 3, 3, 3, 3, 3, 3, 7});
    CHECK(check_le_family(triangular_line_graph(make_wheel(7).graph).derived, s7));

    auto bad = w;
    std::swap(bad.edge_to_vertex[0], bad.edge_to_vertex[2]);
    CHECK_THROWS_AS(le_family_from_preimage(bad), CertificateError);
}

TEST_CASE("check_le_family_conditions")
{
    // K2 admits no family: enumerate every family of nonempty subsets of
    // {0, 1} with each subset used at most twice.
    auto k2 = complete_graph(2);
    std::vector<std::vector<VertexId>> subsets{{0}, {1}, {0, 1}};
    bool any = false;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int c = 0; c <= 2; ++c) {
                LeFamily f;
                for (int i = 0; i < a; ++i)
                    f.members.push_back(subsets[0]);
                for (int i = 0; i < b; ++i)
                    f.members.push_back(subsets[1]);
                for (int i = 0; i < c; ++i)
                    f.members.push_back(subsets[2]);
                any = any || check_le_family(k2, f);
            }
    CHECK_FALSE(any);

    // K3 = T(K3): the three edge pairs form its family and all four
    // conditions hold.
    auto k3 = complete_graph(3);
    LeFamily pairs{{{0, 1}, {1, 2}, {0, 2}}};
    CHECK_FALSE(le_family_violation(k3, pairs).has_value());

    LeFamily triangle{{{0, 1, 2}}};
    auto v1 = le_family_violation(k3, triangle);
    REQUIRE(v1.has_value());
    CHECK(v1->first == 1);

    LeFamily double_cover{{{0, 1, 2}, {0, 1, 2}}};
    auto v2 = le_family_violation(k3, double_cover);
    REQUIRE(v2.has_value());
    CHECK(v2->first == 2);

    // Two members sharing two vertices: on P3 the doubled edge trips
    // condition 2 first, on the edgeless graph condition 3 fires.
    auto p3 = path_graph(3);
    LeFamily overlap{{{0, 1}, {0, 1}, {2}, {2}}};
    auto v3 = le_family_violation(p3, overlap);
    REQUIRE(v3.has_value());
    CHECK(v3->first == 2);
    auto empty = Graph::build(3, std::span<const Edge>{});
    auto v3b = le_family_violation(empty, overlap);
    REQUIRE(v3b.has_value());
    CHECK(v3b->first == 3);

    // Star K_{1,3}: conditions 1-3 hold, but {1} and {0,2,3} meet {0,1} in
    // the adjacent vertices 1 and 0 while being disjoint themselves.
    auto star = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}});
    LeFamily f4{{{0, 1}, {0, 2, 3}, {1}, {2}, {3}}};
    auto v4 = le_family_violation(star, f4);
    REQUIRE(v4.has_value());
    CHECK(v4->first == 4);
}

TEST_CASE("le_family_of_every_small_preimage_checks")
{
    for (const auto& g : graphs_up_to_edges(5)) {
        auto w = self_witness(g);
        auto f = le_family_from_preimage(w);
        CHECK(check_le_family(w.target, f));
        std::size_t cover = 0;
        for (const auto& m : f.members)
            cover += m.size();
        CHECK(cover == 2 * w.target.vertex_count());
    }
}

TEST_CASE("witness_json_round_trip")
{
    auto w = self_witness(make_squared_cycle(7).graph);
    auto j = witness_to_json(w);
    auto back = witness_from_json(j);
    CHECK(back.target == w.target);
    CHECK(back.candidate == w.candidate);
    CHECK(back.edge_to_vertex == w.edge_to_vertex);

    auto missing = j;
    missing["map"].erase(missing["map"].begin());
    CHECK_THROWS_AS(witness_from_json(missing), CertificateError);
    auto doubled = j;
    doubled["map"].push_back(j["map"][0]);
    CHECK_THROWS_AS(witness_from_json(doubled), CertificateError);
    auto nonedge = j;
    nonedge["map"][0] = {0, 0, 1};
    CHECK_THROWS_AS(witness_from_json(nonedge), CertificateError);
    CHECK_THROWS_AS(witness_from_json(nlohmann::json::object()), ParseError);
}
