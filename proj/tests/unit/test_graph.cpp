#include <doctest.h>

#include "test_support.hpp"

#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/graph.hpp>
#include <trilin/graph_io.hpp>
#include <trilin/isomorphism.hpp>

using namespace trilin;
using namespace trilin::testing;

namespace {

Graph double_triangle() { return Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}}); }

} // namespace

TEST_CASE("build_graph_validates_and_dedupes")
{
    auto k3 = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(k3.vertex_count() == 3);
    CHECK(k3.edge_count() == 3);

    auto g = double_triangle();
    CHECK(g.edge_count() == 5);
    CHECK_FALSE(g.has_edge(0, 3));

    auto dup = Graph::build(3, {{0, 1}, {1, 0}, {0, 1}});
    CHECK(dup.edge_count() == 1);

    CHECK_THROWS_AS(Graph::build(2, {{0, 0}}), GraphError);
    CHECK_THROWS_AS(Graph::build(2, {{0, 2}}), GraphError);
    CHECK_THROWS_AS(Graph::build(2, std::span<const Edge>{}, {"a", "a"}), GraphError);
    CHECK_THROWS_AS(Graph::build(2, std::span<const Edge>{}, {"a"}), GraphError);
}

TEST_CASE("enumerate_triangles")
{
    auto k3 = complete_graph(3);
    auto t = enumerate_triangles(k3);
    REQUIRE(t.size() == 1);
    CHECK(t[0].vertices == std::array<VertexId, 3>{0, 1, 2});

    auto dt = enumerate_triangles(double_triangle());
    REQUIRE(dt.size() == 2);
    CHECK(dt[0].vertices == std::array<VertexId, 3>{0, 1, 2});
    CHECK(dt[1].vertices == std::array<VertexId, 3>{1, 2, 3});

    CHECK(enumerate_triangles(path_graph(4)).empty());
    CHECK(enumerate_triangles(complete_graph(5)).size() == 10);

    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        auto g = random_graph(rng, 8, 0.5);
        std::size_t brute = 0;
        for (VertexId a = 0; a < 8; ++a)
            for (VertexId b = a + 1; b < 8; ++b)
                for (VertexId c = b + 1; c < 8; ++c)
                    brute += g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c);
        auto found = enumerate_triangles(g);
        CHECK(found.size() == brute);
        for (const auto& tri : found) {
            auto [a, b, c] = tri.vertices;
            CHECK(a < b);
            CHECK(b < c);
            CHECK(g.has_edge(a, b));
            CHECK(g.has_edge(b, c));
            CHECK(g.has_edge(a, c));
        }
    }
}

TEST_CASE("every_edge_in_unique_triangle")
{
    CHECK(every_edge_in_unique_triangle(make_bowtie().graph));
    CHECK_FALSE(every_edge_in_unique_triangle(complete_graph(4)));
    CHECK_FALSE(every_edge_in_unique_triangle(complete_graph(2)));
    CHECK_FALSE(every_edge_in_unique_triangle(double_triangle()));
}

TEST_CASE("induced_subgraph")
{
    std::vector<VertexId> keep{0, 1, 2};
    auto sub = induced_subgraph(double_triangle(), keep);
    CHECK(sub.graph == complete_graph(3));
    CHECK(sub.to_parent == keep);

    auto bowtie = make_bowtie().graph;
    std::vector<VertexId> wing{0, 3, 4};
    CHECK(induced_subgraph(bowtie, wing).graph.without_labels() == complete_graph(3));

    auto empty = induced_subgraph(bowtie, std::span<const VertexId>{});
    CHECK(empty.graph.vertex_count() == 0);
    CHECK(empty.graph.edge_count() == 0);

    std::vector<VertexId> bad{0, 9};
    CHECK_THROWS_AS(induced_subgraph(bowtie, bad), GraphError);

    std::mt19937 rng(11);
    for (int round = 0; round < 20; ++round) {
        auto g = random_graph(rng, 7, 0.4);
        std::vector<VertexId> all{0, 1, 2, 3, 4, 5, 6};
        CHECK(induced_subgraph(g, all).graph == g);
    }
}

TEST_CASE("labels_survive_subgraphs_and_aliases_resolve")
{
    auto g = Graph::build(3, std::span<const Edge>{}, {"S1/0=S2/12", "x", "y"});
    CHECK(g.find_label("S2/12") == VertexId{0});
    CHECK(g.find_label("S1/0=S2/12") == VertexId{0});
    CHECK_FALSE(g.find_label("S3/0").has_value());
    CHECK(label_path("S1/V2/sun7_1") == std::vector<std::string>{"S1", "V2", "sun7_1"});
    CHECK(label_aliases("a=b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("find_isomorphism")
{
    auto w7 = make_wheel(7).graph.without_labels();
    std::vector<VertexId> perm{5, 3, 7, 1, 0, 2, 6, 4};
    auto shuffled = permuted(w7, perm);
    auto m = find_isomorphism(w7, shuffled);
    REQUIRE(m.has_value());
    CHECK(is_isomorphism(w7, shuffled, *m));

    CHECK_FALSE(find_isomorphism(w7, make_squared_cycle(7).graph).has_value());

    auto s7 = make_sun(7).graph;
    auto self = find_isomorphism(s7, s7);
    REQUIRE(self.has_value());
    CHECK(is_isomorphism(s7, s7, *self));
    CHECK(automorphisms(s7).size() == 14);
    CHECK(automorphisms(w7).size() == 14);
    CHECK(automorphisms(make_squared_cycle(7).graph).size() == 14);
    CHECK(automorphisms(complete_graph(4)).size() == 24);

    // Same degree sequence, different structure: C6 versus two triangles.
    auto c6 = Graph::build(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
    auto two_k3 = Graph::build(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    CHECK_FALSE(find_isomorphism(c6, two_k3).has_value());
}

TEST_CASE("isomorphism_agrees_with_permutation_oracle")
{
    std::mt19937 rng(2024);
    for (int round = 0; round < 300; ++round) {
        std::size_t n = 1 + round % 8;
        auto a = random_graph(rng, n, 0.45);
        Graph b;
        if (round % 2 == 0) {
            std::vector<VertexId> perm(n);
            std::iota(perm.begin(), perm.end(), 0U);
            std::shuffle(perm.begin(), perm.end(), rng);
            b = permuted(a, perm);
        } else {
            b = random_graph(rng, n, 0.45);
        }
        bool oracle = isomorphic_by_permutation(a, b);
        auto forward = find_isomorphism(a, b);
        auto backward = find_isomorphism(b, a);
        CHECK(forward.has_value() == oracle);
        CHECK(backward.has_value() == oracle);
        if (forward)
            CHECK(is_isomorphism(a, b, *forward));
        CHECK((canonical_form(a) == canonical_form(b)) == oracle);
    }
}

TEST_CASE("canonical_form")
{
    auto k3 = complete_graph(3);
    auto relabeled = permuted(k3, {2, 0, 1});
    CHECK(canonical_form(k3) == canonical_form(relabeled));
    CHECK(canonical_form(make_wheel(7).graph) != canonical_form(make_squared_cycle(7).graph));
    auto empty = Graph::build(0, std::span<const Edge>{});
    CHECK(canonical_form(empty) == canonical_form(Graph{}));
    CHECK(canonical_form(empty) == "n=0:");
    CHECK_THROWS_AS(canonical_form(complete_graph(33)), CapacityError);
    CHECK_NOTHROW(canonical_form(complete_graph(40), 40));

    // Highly symmetric inputs stay fast thanks to orbit pruning.
    CHECK(canonical_form(make_sun(12).graph) == canonical_form(permuted(
                                                    make_sun(12).graph.without_labels(),
                                                    {3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14,
                                                     15, 16, 17, 18, 19, 20, 21, 22, 23, 0,  1,  2})));
}

TEST_CASE("edge_list_round_trip")
{
    auto g = double_triangle();
    auto text = to_edge_list(g);
    CHECK(parse_edge_list(text) == g);

    auto p3 = parse_edge_list("0 1\n1 2\n");
    CHECK(p3 == path_graph(3));

    auto commented = parse_edge_list("# a comment\n0 1 # trailing\n\n  1   2\n# n=5\n");
    CHECK(commented.vertex_count() == 5);
    CHECK(commented.edge_count() == 2);

    try {
        parse_edge_list("0 1\n0 0\n");
        FAIL("loop accepted");
    } catch (const ParseError& ex) {
        CHECK(ex.line() == 2);
    }
    CHECK_THROWS_AS(parse_edge_list("0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 x\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("-1 2\n"), ParseError);
}

TEST_CASE("json_round_trip_and_dot")
{
    auto sun = make_sun(7).graph;
    auto j = graph_to_json(sun);
    CHECK(graph_from_json(j) == sun);
    CHECK(parse_graph(j.dump()) == sun);
    CHECK(parse_graph("0 1\n") == complete_graph(2));

    CHECK_THROWS_AS(parse_graph_json("{\"n\": 2, \"edges\": [[0, 0]]}"), ParseError);
    CHECK_THROWS_AS(parse_graph_json("{\"n\": 2}"), ParseError);
    CHECK_THROWS_AS(parse_graph_json("{\"n\": 2, \"edges\": [], \"labels\": {\"0\": \"a\"}}"),
                    ParseError);
    CHECK_THROWS_AS(parse_graph_json("not json"), ParseError);

    auto dot = to_dot(sun, "S7");
    CHECK(dot.find("graph \"S7\" {") == 0);
    CHECK(dot.find("0 -- 1;") != std::string::npos);
}
