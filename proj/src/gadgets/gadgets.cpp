#include <trilin/gadgets.hpp>

#include <trilin/error.hpp>
#include <trilin/graph_io.hpp>

#include <algorithm>
#include <set>

namespace trilin {

namespace {

std::vector<std::string> index_labels(std::size_t n)
{
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return labels;
}

Graph labeled_graph(std::size_t n, const std::vector<Edge>& edges)
{
    return Graph::build(n, std::span<const Edge>(edges), index_labels(n));
}

std::vector<VertexId> iota_ids(VertexId from, VertexId to)
{
    std::vector<VertexId> ids;
    for (VertexId v = from; v < to; ++v)
        ids.push_back(v);
    return ids;
}

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw GraphError(message);
}

std::string join_prefix(const std::string& prefix, const std::string& name)
{
    return prefix.empty() ? name : prefix + "/" + name;
}

bool is_binary_kind(const std::string& kind)
{
    return sun_kind_size(kind).has_value() || kind == binary_enforced_sun12_kind;
}

// Local ids inside an embedded or standalone 7-sun: 2j is u_{j+1}, 2j+1 the
// apex on u_{j+1}u_{j+2}.
constexpr std::array<VertexId, 5> root_bowtie{0, 12, 13, 2, 1};
constexpr std::array<VertexId, 5> equal_bowtie{4, 2, 3, 6, 5};
constexpr std::array<VertexId, 5> not_bowtie{8, 6, 7, 10, 9};

enum class JoinPattern { Equal, Not };

void compose_join(GadgetComposer& c, std::size_t pa, const std::string& ra, std::size_t pb,
                  const std::string& rb, JoinPattern pattern)
{
    const auto& a = c.part(pa);
    const auto& b = c.part(pb);
    check_bowtie(a.graph, a.role(ra));
    check_bowtie(b.graph, b.role(rb));
    // Bowtie layout: 0 center, 1 t1-cycle, 2 t1-apex, 3 t2-cycle, 4 t2-apex.
    c.identify_role(pa, ra, 0, pb, rb, 0);
    if (pattern == JoinPattern::Equal) {
        c.identify_role(pa, ra, 1, pb, rb, 2);
        c.identify_role(pa, ra, 2, pb, rb, 1);
    } else {
        c.identify_role(pa, ra, 1, pb, rb, 1);
        c.identify_role(pa, ra, 2, pb, rb, 2);
    }
    c.identify_role(pa, ra, 3, pb, rb, 4);
    c.identify_role(pa, ra, 4, pb, rb, 3);
}

GadgetBlueprint binary_join(const GadgetBlueprint& a, const std::string& ra,
                            const GadgetBlueprint& b, const std::string& rb, JoinPattern pattern)
{
    GadgetComposer c;
    auto pa = c.add("A", a);
    auto pb = c.add("B", b);
    compose_join(c, pa, ra, pb, rb, pattern);
    return c.finish(pattern == JoinPattern::Equal ? "equal-join" : "not-join");
}

} // namespace

const std::vector<VertexId>& GadgetBlueprint::role(const std::string& name) const
{
    auto it = roles.find(name);
    if (it == roles.end())
        throw StructuralError("blueprint of kind '" + kind + "' has no role '" + name + "'");
    return it->second;
}

const SubGadget& GadgetBlueprint::sub_gadget(const std::string& name) const
{
    auto it = sub_gadgets.find(name);
    if (it == sub_gadgets.end())
        throw StructuralError("blueprint of kind '" + kind + "' has no sub-gadget '" + name + "'");
    return it->second;
}

std::string attachment_role(AttachmentPoint point)
{
    switch (point) {
    case AttachmentPoint::Root:
        return "ROOT";
    case AttachmentPoint::Equal:
        return "EQUAL";
    case AttachmentPoint::Not:
        return "NOT";
    }
    return {};
}

std::optional<std::size_t> sun_kind_size(const std::string& kind)
{
    if (kind.size() <= 3 || kind.compare(0, 3, "sun") != 0)
        return std::nullopt;
    std::size_t k = 0;
    for (std::size_t i = 3; i < kind.size(); ++i) {
        if (kind[i] < '0' || kind[i] > '9')
            return std::nullopt;
        k = k * 10 + static_cast<std::size_t>(kind[i] - '0');
    }
    return k;
}

std::string sun_kind(std::size_t k) { return "sun" + std::to_string(k); }

GadgetBlueprint make_bowtie()
{
    GadgetBlueprint bp;
    bp.kind = "bowtie";
    bp.graph = labeled_graph(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
    bp.roles["bowtie"] = {0, 1, 2, 3, 4};
    bp.roles["center"] = {0};
    return bp;
}

GadgetBlueprint make_double_triangle()
{
    GadgetBlueprint bp;
    bp.kind = "double-triangle";
    bp.graph = labeled_graph(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
    bp.roles["shared-edge"] = {1, 2};
    bp.roles["tips"] = {0, 3};
    return bp;
}

GadgetBlueprint make_fan(std::size_t k)
{
    require(k >= 3, "fan needs k >= 3, got " + std::to_string(k));
    std::vector<Edge> edges;
    auto hub = static_cast<VertexId>(0);
    for (VertexId i = 1; i <= k + 1; ++i) {
        edges.emplace_back(hub, i);
        if (i <= k)
            edges.emplace_back(i, i + 1);
    }
    GadgetBlueprint bp;
    bp.kind = "fan" + std::to_string(k);
    bp.graph = labeled_graph(k + 2, edges);
    bp.roles["hub"] = {hub};
    bp.roles["rim"] = iota_ids(1, static_cast<VertexId>(k + 2));
    return bp;
}

GadgetBlueprint make_triangle_strip(std::size_t k)
{
    require(k >= 3, "triangle strip needs k >= 3, got " + std::to_string(k));
    std::vector<Edge> edges;
    for (VertexId i = 0; i + 1 < k + 2; ++i) {
        edges.emplace_back(i, i + 1);
        if (i + 2 < k + 2)
            edges.emplace_back(i, i + 2);
    }
    GadgetBlueprint bp;
    bp.kind = "triangle-strip" + std::to_string(k);
    bp.graph = labeled_graph(k + 2, edges);
    bp.roles["path"] = iota_ids(0, static_cast<VertexId>(k + 2));
    return bp;
}

GadgetBlueprint make_wheel(std::size_t k)
{
    require(k >= 4, "wheel needs k >= 4, got " + std::to_string(k));
    std::vector<Edge> edges;
    auto hub = static_cast<VertexId>(k);
    for (VertexId i = 0; i < k; ++i) {
        edges.emplace_back(i, static_cast<VertexId>((i + 1) % k));
        edges.emplace_back(i, hub);
    }
    GadgetBlueprint bp;
    bp.kind = "wheel" + std::to_string(k);
    bp.graph = labeled_graph(k + 1, edges);
    bp.roles["rim"] = iota_ids(0, hub);
    bp.roles["hub"] = {hub};
    return bp;
}

GadgetBlueprint make_squared_cycle(std::size_t k)
{
    require(k >= 5, "squared cycle needs k >= 5, got " + std::to_string(k));
    std::vector<Edge> edges;
    for (VertexId i = 0; i < k; ++i) {
        edges.emplace_back(i, static_cast<VertexId>((i + 1) % k));
        edges.emplace_back(i, static_cast<VertexId>((i + 2) % k));
    }
    GadgetBlueprint bp;
    bp.kind = "squared-cycle" + std::to_string(k);
    bp.graph = labeled_graph(k, edges);
    bp.roles["cycle"] = iota_ids(0, static_cast<VertexId>(k));
    return bp;
}

GadgetBlueprint make_sun(std::size_t k)
{
    require(k >= 4, "sun needs k >= 4, got " + std::to_string(k));
    std::vector<Edge> edges;
    const auto n = static_cast<VertexId>(2 * k);
    std::vector<VertexId> cycle, apex;
    for (VertexId i = 0; i < k; ++i) {
        VertexId v = 2 * i;
        VertexId next = (2 * i + 2) % n;
        edges.emplace_back(v, next);
        edges.emplace_back(v, v + 1);
        edges.emplace_back(v + 1, next);
        cycle.push_back(v);
        apex.push_back(v + 1);
    }
    GadgetBlueprint bp;
    bp.kind = sun_kind(k);
    bp.graph = labeled_graph(n, edges);
    bp.roles["cycle"] = std::move(cycle);
    bp.roles["apex"] = std::move(apex);
    if (k == 12) {
        bp.roles["a-triangle"] = {0, 2, 1};
        bp.roles["b-triangle"] = {12, 14, 13};
    }
    return bp;
}

GadgetBlueprint make_binary_enforced_sun(std::size_t k)
{
    require(k >= 9, "binary-enforced sun needs k >= 9, got " + std::to_string(k));
    auto sun = make_sun(k);
    std::vector<Edge> edges(sun.graph.edges());
    const auto n = static_cast<VertexId>(2 * k);
    auto cycle = [&](std::size_t j) { return static_cast<VertexId>((2 * (j - 1)) % n); };
    auto sun_apex = [&](std::size_t j) { return static_cast<VertexId>((2 * (j - 1) + 1) % n); };

    GadgetBlueprint bp;
    bp.kind = k == 12 ? binary_enforced_sun12_kind : "binary-enforced-sun" + std::to_string(k);
    bp.roles = sun.roles;
    std::vector<std::string> labels = index_labels(n);
    for (std::size_t i = 1; i <= k; ++i) {
        auto base = static_cast<VertexId>(n + 5 * (i - 1));
        VertexId w1 = base, w2 = base + 1, a1 = base + 2, a2 = base + 3, a3 = base + 4;
        auto vi = cycle(i);
        auto vi4 = cycle((i - 1 + 4) % k + 1);
        edges.insert(edges.end(), {{vi4, w1}, {w1, w2}, {w2, vi}, {a1, vi4}, {a1, w1},
                                   {a2, w1}, {a2, w2}, {a3, w2}, {a3, vi}});
        auto tag = std::to_string(i);
        labels.push_back("w1_" + tag);
        labels.push_back("w2_" + tag);
        labels.push_back("a1_" + tag);
        labels.push_back("a2_" + tag);
        labels.push_back("a3_" + tag);

        std::vector<VertexId> local;
        for (std::size_t j = 0; j < 5; ++j) {
            std::size_t jj = (i - 1 + j) % k + 1;
            local.push_back(cycle(jj));
            local.push_back(j < 4 ? sun_apex(jj) : a1);
        }
        local.insert(local.end(), {w1, a2, w2, a3});
        bp.sub_gadgets["sun7_" + tag] = {sun_kind(7), std::move(local)};
        bp.roles["chain" + tag] = {w1, w2, a1, a2, a3};
    }
    bp.graph = Graph::build(n + 5 * k, std::span<const Edge>(edges), std::move(labels));
    bp.attributes["k"] = std::to_string(k);
    return bp;
}

void check_bowtie(const Graph& g, const std::vector<VertexId>& bowtie)
{
    if (bowtie.size() != 5)
        throw StructuralError("bowtie role needs 5 vertices, has " + std::to_string(bowtie.size()));
    std::set<VertexId> distinct(bowtie.begin(), bowtie.end());
    if (distinct.size() != 5)
        throw StructuralError("bowtie role repeats a vertex");
    for (auto v : bowtie)
        if (v >= g.vertex_count())
            throw StructuralError("bowtie vertex " + std::to_string(v) + " out of range");
    auto sub = induced_subgraph(g, bowtie);
    auto triangles = enumerate_triangles(sub.graph);
    if (sub.graph.edge_count() != 6 || triangles.size() != 2)
        throw StructuralError("bowtie vertices do not induce two triangles");
    auto c = bowtie[0];
    for (auto [x, y] : {std::pair{bowtie[1], bowtie[2]}, std::pair{bowtie[3], bowtie[4]}})
        if (!g.has_edge(c, x) || !g.has_edge(c, y) || !g.has_edge(x, y))
            throw StructuralError("bowtie triangle through the center is missing an edge");
}

GadgetBlueprint designate_attachments(GadgetBlueprint sun7)
{
    if (sun7.kind != sun_kind(7) || sun7.graph.vertex_count() != 14 ||
        sun7.graph.edge_count() != 21)
        throw StructuralError("attachments can only be designated on a 7-sun, got kind '" +
                              sun7.kind + "'");
    auto ref = make_sun(7);
    if (sun7.graph.edges() != ref.graph.edges())
        throw StructuralError("7-sun does not use the standard vertex layout");
    sun7.roles["ROOT"].assign(root_bowtie.begin(), root_bowtie.end());
    sun7.roles["EQUAL"].assign(equal_bowtie.begin(), equal_bowtie.end());
    sun7.roles["NOT"].assign(not_bowtie.begin(), not_bowtie.end());
    return sun7;
}

void compose_equal(GadgetComposer& c, std::size_t part_a, const std::string& bowtie_a,
                   std::size_t part_b, const std::string& bowtie_b)
{
    compose_join(c, part_a, bowtie_a, part_b, bowtie_b, JoinPattern::Equal);
}

void compose_not(GadgetComposer& c, std::size_t part_a, const std::string& bowtie_a,
                 std::size_t part_b, const std::string& bowtie_b)
{
    compose_join(c, part_a, bowtie_a, part_b, bowtie_b, JoinPattern::Not);
}

GadgetBlueprint attach_equal(const GadgetBlueprint& a, const std::string& bowtie_a,
                             const GadgetBlueprint& b, const std::string& bowtie_b)
{
    return binary_join(a, bowtie_a, b, bowtie_b, JoinPattern::Equal);
}

GadgetBlueprint attach_not(const GadgetBlueprint& a, const std::string& bowtie_a,
                           const GadgetBlueprint& b, const std::string& bowtie_b)
{
    return binary_join(a, bowtie_a, b, bowtie_b, JoinPattern::Not);
}

GadgetBlueprint make_wire(std::size_t length)
{
    auto sun = designate_attachments(make_sun(7));
    GadgetComposer c;
    for (std::size_t i = 0; i <= length; ++i) {
        auto part = c.add("H" + std::to_string(i), sun);
        if (i > 0)
            compose_not(c, part - 1, "NOT", part, "ROOT");
    }
    auto bp = c.finish("wire");
    bp.attributes["length"] = std::to_string(length);
    return bp;
}

GadgetBlueprint make_large_variable_gadget(std::size_t variable, std::size_t index)
{
    auto bp = make_binary_enforced_sun(12);
    const auto& h = bp.sub_gadget("sun7_1");
    bp.roles["H'"] = h.vertices;
    const auto& chain = bp.role("chain1");
    // w1 is u6 of sun7_1; its two chain triangles face away from the clause
    // triangles at sun indices 0-2 and 12-14.
    bp.roles["H'/EQUAL"] = {chain[0], h.vertices[8], chain[2], chain[1], chain[3]};
    bp.attributes["variable"] = std::to_string(variable);
    bp.attributes["index"] = std::to_string(index);
    return bp;
}

bool cluster_tap_is_negated(std::size_t j) { return j % 2 == 1; }

GadgetBlueprint make_variable_cluster(std::size_t variable, std::size_t m)
{
    require(m >= 1, "variable cluster needs m >= 1");
    auto sun = designate_attachments(make_sun(7));
    GadgetComposer c;
    std::vector<std::size_t> wire;
    for (std::size_t i = 0; i <= 2 * m; ++i) {
        wire.push_back(c.add("H" + std::to_string(i), sun));
        if (i > 0)
            compose_not(c, wire[i - 1], "NOT", wire[i], "ROOT");
    }
    for (std::size_t j = 1; j <= 2 * m; ++j) {
        auto v = c.add("V" + std::to_string(j), make_large_variable_gadget(variable, j));
        compose_equal(c, wire[j], "EQUAL", v, "H'/EQUAL");
    }
    auto bp = c.finish("variable-cluster");
    bp.attributes["variable"] = std::to_string(variable);
    bp.attributes["m"] = std::to_string(m);
    for (std::size_t j = 1; j <= 2 * m; ++j)
        bp.attributes["V" + std::to_string(j) + "/negated"] = cluster_tap_is_negated(j) ? "1" : "0";
    return bp;
}

void compose_clause(GadgetComposer& c, const std::array<ClauseLeg, 3>& legs)
{
    for (const auto& leg : legs) {
        const auto& g = c.part(leg.part);
        const auto& a = g.role(leg.role_prefix + "a-triangle");
        const auto& b = g.role(leg.role_prefix + "b-triangle");
        if (a.size() != 3 || b.size() != 3)
            throw StructuralError("clause leg triangles must list three vertices");
        if (g.graph.degree(a[2]) != 2 || g.graph.degree(b[2]) != 2)
            throw StructuralError("clause leg triangles must end in a degree-2 vertex");
        for (const auto& t : {a, b})
            if (!g.graph.has_edge(t[0], t[1]) || !g.graph.has_edge(t[0], t[2]) ||
                !g.graph.has_edge(t[1], t[2]))
                throw StructuralError("clause leg role is not a triangle");
    }
    for (std::size_t l = 0; l < 3; ++l) {
        const auto& cur = legs[l];
        const auto& next = legs[(l + 1) % 3];
        auto a = cur.role_prefix + "a-triangle";
        auto b = next.role_prefix + "b-triangle";
        c.identify_role(cur.part, a, 0, next.part, b, 0);
        c.identify_role(cur.part, a, 1, next.part, b, 2);
        c.identify_role(cur.part, a, 2, next.part, b, 1);
    }
}

GadgetBlueprint join_clause(const GadgetBlueprint& g1, const GadgetBlueprint& g2,
                            const GadgetBlueprint& g3)
{
    GadgetComposer c;
    auto p1 = c.add("S1", g1);
    auto p2 = c.add("S2", g2);
    auto p3 = c.add("S3", g3);
    compose_clause(c, {ClauseLeg{p1, ""}, ClauseLeg{p2, ""}, ClauseLeg{p3, ""}});
    return c.finish("clause");
}

GadgetBlueprint extract_sub_gadget(const GadgetBlueprint& host, const std::string& name)
{
    const auto& sub = host.sub_gadget(name);
    constexpr VertexId absent = static_cast<VertexId>(-1);
    std::vector<VertexId> local(host.graph.vertex_count(), absent);
    for (VertexId i = 0; i < sub.vertices.size(); ++i)
        local[sub.vertices.at(i)] = i;
    std::vector<Edge> edges;
    for (const auto& e : host.graph.edges())
        if (local[e.u] != absent && local[e.v] != absent)
            edges.emplace_back(local[e.u], local[e.v]);

    GadgetBlueprint bp;
    bp.kind = sub.kind;
    std::vector<std::string> labels;
    if (host.graph.has_labels())
        for (auto v : sub.vertices)
            labels.push_back(host.graph.label(v));
    bp.graph = Graph::build(sub.vertices.size(), std::span<const Edge>(edges), std::move(labels));
    auto prefix = name + "/";
    auto translate = [&](const std::vector<VertexId>& ids) {
        std::vector<VertexId> out;
        for (auto v : ids) {
            if (local[v] == absent)
                return std::optional<std::vector<VertexId>>{};
            out.push_back(local[v]);
        }
        return std::optional{out};
    };
    for (const auto& [role, ids] : host.roles)
        if (role.starts_with(prefix))
            if (auto t = translate(ids))
                bp.roles[role.substr(prefix.size())] = *t;
    for (const auto& [child, piece] : host.sub_gadgets)
        if (child.starts_with(prefix))
            if (auto t = translate(piece.vertices))
                bp.sub_gadgets[child.substr(prefix.size())] = {piece.kind, *t};
    return bp;
}

void validate_blueprint(const GadgetBlueprint& bp)
{
    auto n = bp.graph.vertex_count();
    for (const auto& [name, ids] : bp.roles) {
        for (auto v : ids)
            if (v >= n)
                throw StructuralError("role '" + name + "' names vertex " + std::to_string(v) +
                                      " outside the graph");
        auto leaf = name.substr(name.rfind('/') == std::string::npos ? 0 : name.rfind('/') + 1);
        if (leaf == "ROOT" || leaf == "EQUAL" || leaf == "NOT" || leaf == "bowtie")
            check_bowtie(bp.graph, ids);
    }
    for (const auto& [name, piece] : bp.sub_gadgets) {
        std::set<VertexId> distinct(piece.vertices.begin(), piece.vertices.end());
        if (distinct.size() != piece.vertices.size())
            throw StructuralError("sub-gadget '" + name + "' repeats a vertex");
        for (auto v : piece.vertices)
            if (v >= n)
                throw StructuralError("sub-gadget '" + name + "' names vertex " +
                                      std::to_string(v) + " outside the graph");
    }
}

bool same_labeled_graph(const Graph& a, const Graph& b)
{
    if (!a.has_labels() || !b.has_labels() || a.vertex_count() != b.vertex_count() ||
        a.edge_count() != b.edge_count())
        return false;
    auto alias_set = [](const std::string& label) {
        auto parts = label_aliases(label);
        std::sort(parts.begin(), parts.end());
        return parts;
    };
    std::map<std::vector<std::string>, VertexId> index;
    for (VertexId v = 0; v < b.vertex_count(); ++v)
        index[alias_set(b.label(v))] = v;
    std::vector<VertexId> map(a.vertex_count());
    for (VertexId v = 0; v < a.vertex_count(); ++v) {
        auto it = index.find(alias_set(a.label(v)));
        if (it == index.end())
            return false;
        map[v] = it->second;
    }
    return std::all_of(a.edges().begin(), a.edges().end(),
                       [&](const Edge& e) { return b.has_edge(map[e.u], map[e.v]); });
}

nlohmann::json blueprint_to_json(const GadgetBlueprint& bp)
{
    auto j = graph_to_json(bp.graph);
    j["kind"] = bp.kind;
    j["roles"] = bp.roles;
    nlohmann::json subs = nlohmann::json::object();
    for (const auto& [name, piece] : bp.sub_gadgets)
        subs[name] = {{"kind", piece.kind}, {"vertices", piece.vertices}};
    j["sub_gadgets"] = std::move(subs);
    if (!bp.attributes.empty())
        j["attributes"] = bp.attributes;
    return j;
}

GadgetBlueprint blueprint_from_json(const nlohmann::json& j)
{
    GadgetBlueprint bp;
    bp.graph = graph_from_json(j);
    try {
        bp.kind = j.value("kind", std::string{});
        if (j.contains("roles"))
            bp.roles = j.at("roles").get<std::map<std::string, std::vector<VertexId>>>();
        if (j.contains("sub_gadgets"))
            for (const auto& [name, piece] : j.at("sub_gadgets").items())
                bp.sub_gadgets[name] = {piece.at("kind").get<std::string>(),
                                        piece.at("vertices").get<std::vector<VertexId>>()};
        if (j.contains("attributes"))
            bp.attributes = j.at("attributes").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed gadget JSON: ") + ex.what(), 0);
    }
    validate_blueprint(bp);
    return bp;
}

std::size_t GadgetComposer::add(const std::string& prefix, const GadgetBlueprint& part)
{
    std::size_t offset = parent_.size();
    for (std::size_t i = 0; i < part.graph.vertex_count(); ++i)
        parent_.push_back(offset + i);
    parts_.push_back({prefix, part, offset});
    return parts_.size() - 1;
}

std::size_t GadgetComposer::find(std::size_t slot) const
{
    while (parent_[slot] != slot)
        slot = parent_[slot] = parent_[parent_[slot]];
    return slot;
}

void GadgetComposer::identify(std::size_t part_a, VertexId a, std::size_t part_b, VertexId b)
{
    const auto& pa = parts_.at(part_a);
    const auto& pb = parts_.at(part_b);
    if (a >= pa.blueprint.graph.vertex_count() || b >= pb.blueprint.graph.vertex_count())
        throw StructuralError("identification names a vertex outside its part");
    auto ra = find(pa.offset + a);
    auto rb = find(pb.offset + b);
    if (ra != rb)
        parent_[std::max(ra, rb)] = std::min(ra, rb);
}

void GadgetComposer::identify_role(std::size_t part_a, const std::string& role_a,
                                   std::size_t index_a, std::size_t part_b,
                                   const std::string& role_b, std::size_t index_b)
{
    const auto& ra = parts_.at(part_a).blueprint.role(role_a);
    const auto& rb = parts_.at(part_b).blueprint.role(role_b);
    if (index_a >= ra.size() || index_b >= rb.size())
        throw StructuralError("role index out of range in identification");
    identify(part_a, ra[index_a], part_b, rb[index_b]);
}

GadgetBlueprint GadgetComposer::finish(std::string kind) const
{
    constexpr VertexId unset = static_cast<VertexId>(-1);
    std::vector<VertexId> id_of_root(parent_.size(), unset);
    std::vector<VertexId> slot_id(parent_.size());
    std::vector<std::vector<std::string>> names;
    VertexId next = 0;
    for (std::size_t slot = 0; slot < parent_.size(); ++slot) {
        auto root = find(slot);
        if (id_of_root[root] == unset) {
            id_of_root[root] = next++;
            names.emplace_back();
        }
        slot_id[slot] = id_of_root[root];
    }
    std::vector<Edge> edges;
    for (const auto& p : parts_) {
        const auto& g = p.blueprint.graph;
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            names[slot_id[p.offset + v]].push_back(
                join_prefix(p.prefix, g.has_labels() ? g.label(v) : std::to_string(v)));
        for (const auto& e : g.edges()) {
            auto u = slot_id[p.offset + e.u];
            auto v = slot_id[p.offset + e.v];
            if (u == v)
                throw StructuralError("identification collapses an edge of part '" + p.prefix +
                                      "'");
            edges.emplace_back(u, v);
        }
    }
    std::vector<std::string> labels;
    for (auto& aliases : names) {
        std::string joined;
        for (const auto& a : aliases)
            joined += (joined.empty() ? "" : "=") + a;
        labels.push_back(std::move(joined));
    }

    GadgetBlueprint bp;
    bp.kind = std::move(kind);
    bp.graph = Graph::build(next, std::span<const Edge>(edges), std::move(labels));
    auto translate = [&](const Part& p, const std::vector<VertexId>& ids) {
        std::vector<VertexId> out;
        for (auto v : ids)
            out.push_back(slot_id[p.offset + v]);
        return out;
    };
    for (const auto& p : parts_) {
        for (const auto& [name, ids] : p.blueprint.roles)
            bp.roles[join_prefix(p.prefix, name)] = translate(p, ids);
        for (const auto& [name, piece] : p.blueprint.sub_gadgets)
            bp.sub_gadgets[join_prefix(p.prefix, name)] = {piece.kind,
                                                           translate(p, piece.vertices)};
        for (const auto& [key, value] : p.blueprint.attributes)
            bp.attributes[join_prefix(p.prefix, key)] = value;
        if (is_binary_kind(p.blueprint.kind) && !p.prefix.empty())
            bp.sub_gadgets[p.prefix] = {p.blueprint.kind,
                                        translate(p, iota_ids(0, static_cast<VertexId>(
                                                                     p.blueprint.graph.vertex_count())))};
    }
    return bp;
}

} // namespace trilin
