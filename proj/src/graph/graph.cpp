#include <trilin/graph.hpp>

#include <trilin/error.hpp>

#include <algorithm>
#include <unordered_set>

namespace trilin {

namespace {

std::vector<std::string> split(std::string_view text, char separator)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(separator, start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

} // namespace

Graph Graph::build(std::size_t vertex_count, std::span<const Edge> edges,
                   std::vector<std::string> labels)
{
    Graph g;
    g.adjacency_.resize(vertex_count);
    g.edges_.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u == e.v)
            throw GraphError("self-loop at vertex " + std::to_string(e.u));
        if (e.v >= vertex_count)
            throw GraphError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             "} has an endpoint outside 0.." +
                             std::to_string(vertex_count == 0 ? 0 : vertex_count - 1));
        g.edges_.push_back(e);
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
    for (const auto& e : g.edges_) {
        g.adjacency_[e.u].push_back(e.v);
        g.adjacency_[e.v].push_back(e.u);
    }
    for (auto& row : g.adjacency_)
        std::sort(row.begin(), row.end());

    if (!labels.empty()) {
        if (labels.size() != vertex_count)
            throw GraphError("label count " + std::to_string(labels.size()) +
                             " does not match vertex count " + std::to_string(vertex_count));
        std::unordered_set<std::string_view> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second)
                throw GraphError("duplicate vertex label '" + l + "'");
        g.labels_ = std::move(labels);
    }
    return g;
}

Graph Graph::build(std::size_t vertex_count,
                   std::span<const std::pair<VertexId, VertexId>> edges,
                   std::vector<std::string> labels)
{
    std::vector<Edge> converted;
    converted.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a == b)
            throw GraphError("self-loop at vertex " + std::to_string(a));
        converted.emplace_back(a, b);
    }
    return build(vertex_count, std::span<const Edge>(converted), std::move(labels));
}

Graph Graph::build(std::size_t vertex_count,
                   std::initializer_list<std::pair<VertexId, VertexId>> edges)
{
    std::vector<std::pair<VertexId, VertexId>> list(edges);
    return build(vertex_count, std::span<const std::pair<VertexId, VertexId>>(list));
}

bool Graph::has_edge(VertexId a, VertexId b) const
{
    if (a >= adjacency_.size() || b >= adjacency_.size())
        return false;
    const auto& row = adjacency_[a].size() < adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
    VertexId target = &row == &adjacency_[a] ? b : a;
    return std::binary_search(row.begin(), row.end(), target);
}

std::optional<std::size_t> Graph::edge_index(VertexId a, VertexId b) const
{
    if (a == b)
        return std::nullopt;
    Edge key(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key)
        return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<VertexId> Graph::find_label(std::string_view label) const
{
    for (VertexId v = 0; v < labels_.size(); ++v)
        if (labels_[v] == label)
            return v;
    for (VertexId v = 0; v < labels_.size(); ++v)
        for (const auto& alias : label_aliases(labels_[v]))
            if (alias == label)
                return v;
    return std::nullopt;
}

Graph Graph::with_labels(std::vector<std::string> labels) const
{
    return build(vertex_count(), std::span<const Edge>(edges_), std::move(labels));
}

Graph Graph::without_labels() const
{
    Graph copy = *this;
    copy.labels_.clear();
    return copy;
}

std::vector<Triangle> enumerate_triangles(const Graph& g)
{
    std::vector<Triangle> out;
    for (const auto& e : g.edges()) {
        auto nu = g.neighbors(e.u);
        auto nv = g.neighbors(e.v);
        auto iu = std::upper_bound(nu.begin(), nu.end(), e.v);
        auto iv = std::upper_bound(nv.begin(), nv.end(), e.v);
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv)
                ++iu;
            else if (*iv < *iu)
                ++iv;
            else {
                out.push_back(Triangle{{e.u, e.v, *iu}});
                ++iu;
                ++iv;
            }
        }
    }
    return out;
}

std::vector<std::size_t> triangle_counts_per_edge(const Graph& g)
{
    std::vector<std::size_t> counts(g.edge_count(), 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto e = g.edges()[i];
        auto nu = g.neighbors(e.u);
        auto nv = g.neighbors(e.v);
        std::size_t common = 0;
        auto iu = nu.begin();
        auto iv = nv.begin();
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv)
                ++iu;
            else if (*iv < *iu)
                ++iv;
            else {
                ++common;
                ++iu;
                ++iv;
            }
        }
        counts[i] = common;
    }
    return counts;
}

bool every_edge_in_unique_triangle(const Graph& g)
{
    auto counts = triangle_counts_per_edge(g);
    return std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 1; });
}

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices)
{
    std::vector<VertexId> keep(vertices.begin(), vertices.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    constexpr VertexId absent = static_cast<VertexId>(-1);
    std::vector<VertexId> local(g.vertex_count(), absent);
    for (VertexId i = 0; i < keep.size(); ++i) {
        if (keep[i] >= g.vertex_count())
            throw GraphError("vertex " + std::to_string(keep[i]) + " is not in the graph");
        local[keep[i]] = i;
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (local[e.u] != absent && local[e.v] != absent)
            edges.emplace_back(local[e.u], local[e.v]);
    std::vector<std::string> labels;
    if (g.has_labels())
        for (auto v : keep)
            labels.push_back(g.label(v));
    return {Graph::build(keep.size(), std::span<const Edge>(edges), std::move(labels)),
            std::move(keep)};
}

std::vector<std::string> label_path(std::string_view label) { return split(label, '/'); }

std::vector<std::string> label_aliases(std::string_view label) { return split(label, '='); }

} // namespace trilin
