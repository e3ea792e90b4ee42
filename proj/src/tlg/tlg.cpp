#include <trilin/tlg.hpp>

#include <trilin/error.hpp>
#include <trilin/graph_io.hpp>

#include <algorithm>
#include <map>

namespace trilin {

namespace {

std::vector<VertexId> identity_map(std::size_t n)
{
    std::vector<VertexId> out(n);
    for (VertexId i = 0; i < n; ++i)
        out[i] = i;
    return out;
}

/// Pairs of edge indices incident at a vertex, optionally only those closed
/// by a triangle.
std::vector<Edge> incident_pairs(const Graph& g, bool require_triangle)
{
    std::vector<Edge> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto nb = g.neighbors(v);
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                if (require_triangle && !g.has_edge(nb[a], nb[b]))
                    continue;
                auto ea = *g.edge_index(v, nb[a]);
                auto eb = *g.edge_index(v, nb[b]);
                out.emplace_back(static_cast<VertexId>(ea), static_cast<VertexId>(eb));
            }
    }
    return out;
}

std::vector<VertexId> normalized_subset(std::span<const VertexId> subset, std::size_t n)
{
    std::vector<VertexId> s(subset.begin(), subset.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= n)
        throw GraphError("vertex " + std::to_string(s.back()) + " is not in the graph");
    return s;
}

void check_bijection(const PreimageWitness& w)
{
    if (w.edge_to_vertex.size() != w.candidate.edge_count())
        throw CertificateError("map covers " + std::to_string(w.edge_to_vertex.size()) +
                               " edges but the candidate has " +
                               std::to_string(w.candidate.edge_count()));
    if (w.candidate.edge_count() != w.target.vertex_count())
        throw CertificateError("candidate has " + std::to_string(w.candidate.edge_count()) +
                               " edges but the target has " +
                               std::to_string(w.target.vertex_count()) + " vertices");
    std::vector<bool> hit(w.target.vertex_count(), false);
    for (auto t : w.edge_to_vertex) {
        if (t >= w.target.vertex_count())
            throw CertificateError("map sends an edge to unknown vertex " + std::to_string(t));
        if (hit[t])
            throw CertificateError("target vertex " + std::to_string(t) +
                                   " is the image of two edges");
        hit[t] = true;
    }
}

} // namespace

TlgResult triangular_line_graph(const Graph& g)
{
    auto pairs = incident_pairs(g, true);
    return {g, Graph::build(g.edge_count(), std::span<const Edge>(pairs)),
            identity_map(g.edge_count())};
}

TlgResult line_graph(const Graph& g)
{
    auto pairs = incident_pairs(g, false);
    return {g, Graph::build(g.edge_count(), std::span<const Edge>(pairs)),
            identity_map(g.edge_count())};
}

Graph gallai_graph(const Graph& g)
{
    auto all = incident_pairs(g, false);
    std::vector<Edge> kept;
    for (const auto& e : all) {
        const auto& a = g.edges()[e.u];
        const auto& b = g.edges()[e.v];
        VertexId shared = a.touches(b.u) ? b.u : b.v;
        if (!g.has_edge(a.other(shared), b.other(shared)))
            kept.push_back(e);
    }
    return Graph::build(g.edge_count(), std::span<const Edge>(kept));
}

bool verify_certificate(const PreimageWitness& w)
{
    check_bijection(w);
    auto derived = triangular_line_graph(w.candidate).derived;
    if (derived.edge_count() != w.target.edge_count())
        return false;
    return std::all_of(derived.edges().begin(), derived.edges().end(), [&](const Edge& e) {
        return w.target.has_edge(w.edge_to_vertex[e.u], w.edge_to_vertex[e.v]);
    });
}

bool is_triangle_induced(const Graph& h, std::span<const VertexId> subset)
{
    auto s = normalized_subset(subset, h.vertex_count());
    std::vector<bool> inside(h.vertex_count(), false);
    for (auto v : s)
        inside[v] = true;
    for (const auto& t : enumerate_triangles(h)) {
        int count = 0;
        for (auto v : t.vertices)
            count += inside[v] ? 1 : 0;
        if (count == 2)
            return false;
    }
    return true;
}

RestrictedWitness restrict_preimage_mapped(const PreimageWitness& w,
                                           std::span<const VertexId> subset)
{
    if (!verify_certificate(w))
        throw CertificateError("input witness does not verify");
    if (!is_triangle_induced(w.target, subset))
        throw StructuralError("subset is not a triangle-induced subgraph of the target");

    auto sub = induced_subgraph(w.target, subset);
    constexpr VertexId absent = static_cast<VertexId>(-1);
    std::vector<VertexId> local_target(w.target.vertex_count(), absent);
    for (VertexId i = 0; i < sub.to_parent.size(); ++i)
        local_target[sub.to_parent[i]] = i;

    std::vector<VertexId> endpoints;
    for (std::size_t e = 0; e < w.candidate.edge_count(); ++e)
        if (local_target[w.edge_to_vertex[e]] != absent) {
            endpoints.push_back(w.candidate.edges()[e].u);
            endpoints.push_back(w.candidate.edges()[e].v);
        }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    std::vector<VertexId> local_candidate(w.candidate.vertex_count(), absent);
    for (VertexId i = 0; i < endpoints.size(); ++i)
        local_candidate[endpoints[i]] = i;

    std::vector<Edge> edges;
    std::vector<VertexId> images;
    for (std::size_t e = 0; e < w.candidate.edge_count(); ++e) {
        auto t = local_target[w.edge_to_vertex[e]];
        if (t == absent)
            continue;
        const auto& edge = w.candidate.edges()[e];
        edges.emplace_back(local_candidate[edge.u], local_candidate[edge.v]);
        images.push_back(t);
    }
    // Graph::build sorts edges; carry the images along.
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    std::vector<Edge> sorted_edges;
    std::vector<VertexId> sorted_images;
    for (auto i : order) {
        sorted_edges.push_back(edges[i]);
        sorted_images.push_back(images[i]);
    }

    std::vector<std::string> labels;
    if (w.candidate.has_labels())
        for (auto v : endpoints)
            labels.push_back(w.candidate.label(v));

    RestrictedWitness out;
    out.witness.target = std::move(sub.graph);
    out.witness.candidate = Graph::build(endpoints.size(), std::span<const Edge>(sorted_edges),
                                         std::move(labels));
    out.witness.edge_to_vertex = std::move(sorted_images);
    out.target_to_parent = std::move(sub.to_parent);
    out.candidate_to_parent = std::move(endpoints);
    return out;
}

PreimageWitness restrict_preimage(const PreimageWitness& w, std::span<const VertexId> subset)
{
    return restrict_preimage_mapped(w, subset).witness;
}

LeFamily le_family_from_preimage(const PreimageWitness& w)
{
    if (!verify_certificate(w))
        throw CertificateError("witness does not verify");
    LeFamily family;
    const auto& g = w.candidate;
    std::vector<int> cover(w.target.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) == 0)
            continue;
        std::vector<VertexId> member;
        for (auto u : g.neighbors(v)) {
            auto t = w.edge_to_vertex[*g.edge_index(v, u)];
            member.push_back(t);
            ++cover[t];
        }
        std::sort(member.begin(), member.end());
        family.members.push_back(std::move(member));
    }
    for (VertexId t = 0; t < cover.size(); ++t)
        for (int c = cover[t]; c < 2; ++c)
            family.members.push_back({t});
    return family;
}

LeFamily canonical_le_family(LeFamily family)
{
    for (auto& m : family.members)
        std::sort(m.begin(), m.end());
    std::sort(family.members.begin(), family.members.end());
    return family;
}

std::optional<std::pair<int, std::string>> le_family_violation(const Graph& h,
                                                               const LeFamily& family)
{
    const auto n = h.vertex_count();
    const auto& members = family.members;
    std::vector<std::vector<bool>> in(members.size(), std::vector<bool>(n, false));
    for (std::size_t i = 0; i < members.size(); ++i)
        for (auto v : members[i]) {
            if (v >= n)
                return std::pair{1, "member " + std::to_string(i) + " names unknown vertex " +
                                        std::to_string(v)};
            in[i][v] = true;
        }

    std::vector<int> cover(n, 0);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (VertexId v = 0; v < n; ++v)
            cover[v] += in[i][v] ? 1 : 0;
    for (VertexId v = 0; v < n; ++v)
        if (cover[v] != 2)
            return std::pair{1, "vertex " + std::to_string(v) + " lies in " +
                                    std::to_string(cover[v]) + " members"};

    for (const auto& e : h.edges()) {
        int count = 0;
        for (std::size_t i = 0; i < members.size(); ++i)
            count += in[i][e.u] && in[i][e.v] ? 1 : 0;
        if (count != 1)
            return std::pair{2, "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                    "} lies in " + std::to_string(count) + " members"};
    }

    // Pairwise intersections, kept for condition 4.
    constexpr VertexId none = static_cast<VertexId>(-1);
    std::vector<std::vector<VertexId>> meet(members.size(),
                                            std::vector<VertexId>(members.size(), none));
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            std::size_t common = 0;
            VertexId last = none;
            for (auto v : members[i])
                if (in[j][v]) {
                    ++common;
                    last = v;
                }
            if (common > 1)
                return std::pair{3, "members " + std::to_string(i) + " and " + std::to_string(j) +
                                        " share " + std::to_string(common) + " vertices"};
            meet[i][j] = meet[j][i] = common == 0 ? none : last;
        }

    for (std::size_t k = 0; k < members.size(); ++k)
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i == k || meet[i][k] == none)
                continue;
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (j == k || j == i || meet[j][k] == none)
                    continue;
                auto vi = meet[i][k];
                auto vj = meet[j][k];
                if (vi == vj)
                    continue;
                bool adjacent = h.has_edge(vi, vj);
                bool intersect = meet[i][j] != none;
                if (adjacent != intersect)
                    return std::pair{4, "members " + std::to_string(i) + "," + std::to_string(j) +
                                            "," + std::to_string(k) +
                                            " break the adjacency/intersection rule"};
            }
        }
    return std::nullopt;
}

bool check_le_family(const Graph& h, const LeFamily& family)
{
    return !le_family_violation(h, family).has_value();
}

nlohmann::json witness_to_json(const PreimageWitness& w)
{
    nlohmann::json map = nlohmann::json::array();
    for (std::size_t e = 0; e < w.candidate.edge_count(); ++e) {
        const auto& edge = w.candidate.edges()[e];
        map.push_back({edge.u, edge.v, e < w.edge_to_vertex.size() ? w.edge_to_vertex[e] : 0});
    }
    return {{"target", graph_to_json(w.target)},
            {"candidate", graph_to_json(w.candidate)},
            {"map", std::move(map)}};
}

PreimageWitness witness_from_json(const nlohmann::json& j)
{
    PreimageWitness w;
    try {
        w.target = graph_from_json(j.at("target"));
        w.candidate = graph_from_json(j.at("candidate"));
        constexpr VertexId unset = static_cast<VertexId>(-1);
        w.edge_to_vertex.assign(w.candidate.edge_count(), unset);
        for (const auto& entry : j.at("map")) {
            if (!entry.is_array() || entry.size() != 3)
                throw ParseError("map entries must be [u, v, target]", 0);
            auto u = entry[0].get<VertexId>();
            auto v = entry[1].get<VertexId>();
            auto index = w.candidate.edge_index(u, v);
            if (!index)
                throw CertificateError("map names {" + std::to_string(u) + "," +
                                       std::to_string(v) + "}, which is not a candidate edge");
            VertexId t = 0;
            if (entry[2].is_string()) {
                auto label = entry[2].get<std::string>();
                auto found = w.target.find_label(label);
                if (!found)
                    throw CertificateError("map names unknown target label '" + label + "'");
                t = *found;
            } else {
                t = entry[2].get<VertexId>();
            }
            if (w.edge_to_vertex[*index] != unset)
                throw CertificateError("candidate edge {" + std::to_string(u) + "," +
                                       std::to_string(v) + "} is mapped twice");
            w.edge_to_vertex[*index] = t;
        }
        for (std::size_t e = 0; e < w.edge_to_vertex.size(); ++e)
            if (w.edge_to_vertex[e] == unset)
                throw CertificateError("candidate edge {" +
                                       std::to_string(w.candidate.edges()[e].u) + "," +
                                       std::to_string(w.candidate.edges()[e].v) +
                                       "} has no image");
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed witness JSON: ") + ex.what(), 0);
    }
    return w;
}

} // namespace trilin
