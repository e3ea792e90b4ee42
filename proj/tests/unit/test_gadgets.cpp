#include <doctest.h>

#include "test_support.hpp"

#include <trilin/appendix.hpp>
#include <trilin/error.hpp>
#include <trilin/gadgets.hpp>
#include <trilin/graph_io.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/tlg.hpp>

#include <filesystem>
#include <set>

using namespace trilin;
using namespace trilin::testing;

namespace {

bool iso(const Graph& a, const Graph& b) { return find_isomorphism(a, b).has_value(); }

Graph tlg(const Graph& g) { return triangular_line_graph(g).derived; }

void check_registry(const GadgetBlueprint& bp)
{
    validate_blueprint(bp);
    for (const auto& [name, piece] : bp.sub_gadgets) {
        CAPTURE(name);
        CHECK(is_triangle_induced(bp.graph, piece.vertices));
        auto local = extract_sub_gadget(bp, name).graph.without_labels();
        if (piece.kind == sun_kind(7))
            CHECK(local == make_sun(7).graph.without_labels());
        else if (piece.kind == binary_enforced_sun12_kind)
            CHECK(local == make_binary_enforced_sun(12).graph.without_labels());
    }
}

} // namespace

TEST_CASE("bowtie_and_double_triangle")
{
    auto bowtie = make_bowtie();
    CHECK(bowtie.graph.vertex_count() == 5);
    CHECK(bowtie.graph.edge_count() == 6);
    auto dt = make_double_triangle();
    CHECK(dt.graph.vertex_count() == 4);
    CHECK(dt.graph.edge_count() == 5);
    CHECK(iso(tlg(dt.graph), bowtie.graph));
    CHECK_NOTHROW(validate_blueprint(bowtie));
}

TEST_CASE("fans_and_strips")
{
    CHECK(iso(make_fan(3).graph, make_triangle_strip(3).graph));
    CHECK(make_fan(4).graph.vertex_count() == 6);
    CHECK_FALSE(iso(make_fan(4).graph, make_triangle_strip(4).graph));
    for (std::size_t k = 3; k <= 8; ++k) {
        CHECK(enumerate_triangles(make_fan(k).graph).size() == k);
        auto strip = make_triangle_strip(k);
        auto tris = enumerate_triangles(strip.graph);
        REQUIRE(tris.size() == k);
        // Triangle i is {i, i+1, i+2}; at distance two they share a vertex,
        // further apart they are disjoint.
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                std::set<VertexId> a(tris[i].vertices.begin(), tris[i].vertices.end());
                std::size_t common = 0;
                for (auto v : tris[j].vertices)
                    common += a.count(v);
                if (j - i == 1)
                    CHECK(common == 2);
                else if (j - i == 2)
                    CHECK(common == 1);
                else
                    CHECK(common == 0);
            }
    }
    CHECK_THROWS_AS(make_fan(2), GraphError);
    CHECK_THROWS_AS(make_triangle_strip(2), GraphError);
}

TEST_CASE("wheels_squared_cycles_suns")
{
    auto w7 = make_wheel(7);
    CHECK(w7.graph.vertex_count() == 8);
    CHECK(w7.graph.edge_count() == 14);
    CHECK(w7.role("hub") == std::vector<VertexId>{7});
    auto c7 = make_squared_cycle(7);
    CHECK(c7.graph.vertex_count() == 7);
    CHECK(c7.graph.edge_count() == 14);
    auto s7 = make_sun(7);
    CHECK(s7.graph.vertex_count() == 14);
    CHECK(s7.graph.edge_count() == 21);
    CHECK(s7.role("cycle").size() == 7);
    CHECK(s7.role("apex").size() == 7);
    for (auto a : s7.role("apex"))
        CHECK(s7.graph.degree(a) == 2);
    for (auto c : s7.role("cycle"))
        CHECK(s7.graph.degree(c) == 4);

    for (std::size_t k = 7; k <= 12; ++k) {
        CAPTURE(k);
        auto sun = make_sun(k).graph;
        CHECK(iso(tlg(make_wheel(k).graph), sun));
        CHECK(iso(tlg(make_squared_cycle(k).graph), sun));
    }
    CHECK_THROWS_AS(make_wheel(3), GraphError);
    CHECK_THROWS_AS(make_sun(3), GraphError);
    CHECK_THROWS_AS(make_squared_cycle(4), GraphError);
}

TEST_CASE("binary_enforced_sun")
{
    auto b = make_binary_enforced_sun(12);
    CHECK(b.graph.vertex_count() == 84);
    CHECK(b.graph.edge_count() == 144);
    CHECK(b.sub_gadgets.size() == 12);
    CHECK(every_edge_in_unique_triangle(b.graph));
    auto s7 = make_sun(7).graph;
    for (const auto& [name, piece] : b.sub_gadgets) {
        CAPTURE(name);
        CHECK(piece.kind == "sun7");
        auto sub = induced_subgraph(b.graph, piece.vertices).graph;
        CHECK(iso(sub, s7));
        CHECK(is_triangle_induced(b.graph, piece.vertices));
    }
    check_registry(b);
    CHECK(make_binary_enforced_sun(9).graph.vertex_count() == 18 + 45);
    CHECK_THROWS_AS(make_binary_enforced_sun(8), GraphError);
}

TEST_CASE("designate_attachments")
{
    auto s = designate_attachments(make_sun(7));
    std::set<std::set<VertexId>> triangles;
    for (const auto* role : {"ROOT", "EQUAL", "NOT"}) {
        const auto& b = s.role(role);
        CHECK_NOTHROW(check_bowtie(s.graph, b));
        triangles.insert({b[0], b[1], b[2]});
        triangles.insert({b[0], b[3], b[4]});
    }
    // Six distinct triangles out of the seven.
    CHECK(triangles.size() == 6);
    CHECK(designate_attachments(s) == s);
    CHECK_THROWS_AS(designate_attachments(make_sun(8)), StructuralError);
    CHECK_THROWS_AS(designate_attachments(make_wheel(7)), StructuralError);
}

TEST_CASE("equal_and_not_joins")
{
    auto s = designate_attachments(make_sun(7));
    auto eq = attach_equal(s, "EQUAL", s, "EQUAL");
    auto ne = attach_not(s, "NOT", s, "ROOT");
    CHECK(eq.graph.vertex_count() == 23);
    CHECK(ne.graph.vertex_count() == 23);
    // Both bowtie triangles coincide after the join: 21 + 21 - 6 edges.
    CHECK(eq.graph.edge_count() == 36);
    CHECK(ne.graph.edge_count() == 36);
    CHECK(every_edge_in_unique_triangle(eq.graph));
    CHECK(every_edge_in_unique_triangle(ne.graph));
    CHECK(eq.sub_gadgets.size() == 2);
    check_registry(eq);
    check_registry(ne);
    auto eq2 = attach_equal(s, "NOT", s, "ROOT");
    CHECK_FALSE(iso(eq2.graph, ne.graph));

    auto broken = s;
    broken.roles["EQUAL"] = {0, 1, 2, 3, 4};
    CHECK_THROWS_AS(attach_equal(broken, "EQUAL", s, "EQUAL"), StructuralError);
}

TEST_CASE("wire")
{
    auto w0 = make_wire(0);
    CHECK(iso(w0.graph, make_sun(7).graph));
    auto w2 = make_wire(2);
    CHECK(w2.graph.vertex_count() == 32);
    CHECK(every_edge_in_unique_triangle(w2.graph));
    CHECK(w2.sub_gadgets.size() == 3);
    check_registry(w2);
}

TEST_CASE("large_variable_gadget")
{
    auto g = make_large_variable_gadget(1, 2);
    CHECK(g.kind == binary_enforced_sun12_kind);
    const auto& h = g.role("H'");
    CHECK(h.size() == 14);
    CHECK(is_triangle_induced(g.graph, h));
    const auto& eq = g.role("H'/EQUAL");
    CHECK_NOTHROW(check_bowtie(g.graph, eq));
    std::set<VertexId> clause;
    for (const auto* role : {"a-triangle", "b-triangle"})
        for (auto v : g.role(role))
            clause.insert(v);
    CHECK(clause.size() == 6);
    for (auto v : eq)
        CHECK(clause.count(v) == 0);
    for (auto v : eq)
        CHECK(std::find(h.begin(), h.end(), v) != h.end());
}

TEST_CASE("variable_cluster")
{
    auto c = make_variable_cluster(1, 1);
    // 3 wire suns and 2 large variable gadgets, 4 joins of 5 vertices.
    CHECK(c.graph.vertex_count() == 3 * 14 + 2 * 84 - 4 * 5);
    CHECK(every_edge_in_unique_triangle(c.graph));
    for (const auto* name : {"H0", "H1", "H2"})
        CHECK(c.sub_gadget(name).kind == "sun7");
    CHECK(c.sub_gadget("V1").kind == binary_enforced_sun12_kind);
    CHECK(c.sub_gadget("V2").kind == binary_enforced_sun12_kind);
    CHECK(c.attributes.at("V1/negated") == "1");
    CHECK(c.attributes.at("V2/negated") == "0");
    check_registry(c);
    CHECK_THROWS_AS(make_variable_cluster(1, 0), GraphError);
}

TEST_CASE("join_clause_reproduces_table_1")
{
    auto sun = make_sun(12);
    auto clause = join_clause(sun, sun, sun);
    CHECK(clause.graph.vertex_count() == 63);
    CHECK(clause.graph.edge_count() == 99);
    CHECK(every_edge_in_unique_triangle(clause.graph));
    auto table = load_appendix_clause_gadget();
    CHECK(table.graph.vertex_count() == 63);
    CHECK(same_labeled_graph(clause.graph, table.graph));
    CHECK(iso(clause.graph, table.graph));
    check_registry(clause);
    check_registry(table);

    auto wheel = make_wheel(12);
    CHECK_THROWS_AS(join_clause(wheel, sun, sun), StructuralError);
}

TEST_CASE("appendix_preimages")
{
    auto target = load_appendix_clause_gadget();
    const std::size_t expected_vertices[] = {27, 28, 29};
    for (int wheels = 0; wheels <= 2; ++wheels) {
        CAPTURE(wheels);
        auto w = load_appendix_preimage(wheels);
        CHECK(w.candidate.vertex_count() == expected_vertices[wheels]);
        CHECK(w.candidate.edge_count() == 63);
        CHECK(verify_certificate(w));
        int found_wheels = 0;
        for (const auto* name : {"S1", "S2", "S3"}) {
            auto r = restrict_preimage(w, target.sub_gadget(name).vertices);
            bool is_wheel = iso(r.candidate, make_wheel(12).graph);
            bool is_cycle = iso(r.candidate, make_squared_cycle(12).graph);
            CHECK(is_wheel != is_cycle);
            found_wheels += is_wheel;
        }
        CHECK(found_wheels == wheels);
    }
    CHECK_THROWS(load_appendix_preimage(3));
}

TEST_CASE("appendix_integrity_checks")
{
    for (const auto* name : {"table1", "table2", "table3", "table4"})
        CHECK_NOTHROW(appendix_table_text(name));

    auto dir = std::filesystem::temp_directory_path() / "trilin_appendix_test";
    std::filesystem::create_directories(dir);
    for (const auto* name : {"table1", "table2", "table3", "table4"})
        write_file((dir / (std::string(name) + ".json")).string(), appendix_table_text(name));
    CHECK_NOTHROW(load_appendix_preimage(1, dir.string()));

    auto text = appendix_table_text("table3");
    auto pos = text.find("[0, 1]");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "[0, 9]");
    write_file((dir / "table3.json").string(), text);
    CHECK_THROWS_AS(load_appendix_preimage(1, dir.string()), IntegrityError);
    CHECK_THROWS_AS(appendix_table_text("table1", (dir / "missing").string()), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("blueprint_json_round_trip")
{
    auto c = make_variable_cluster(2, 1);
    auto back = blueprint_from_json(blueprint_to_json(c));
    CHECK(back == c);
    auto j = blueprint_to_json(make_sun(7));
    j["roles"]["cycle"].push_back(99);
    CHECK_THROWS_AS(blueprint_from_json(j), StructuralError);
}

TEST_CASE("composer_rejects_collapsed_edges")
{
    GadgetComposer c;
    auto a = c.add("A", make_sun(7));
    c.identify(a, 0, a, 1);
    CHECK_THROWS_AS(c.finish("broken"), StructuralError);
}
