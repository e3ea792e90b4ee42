#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trilin {

using VertexId = std::uint32_t;

/// Unordered vertex pair stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    bool touches(VertexId x) const noexcept { return u == x || v == x; }
    VertexId other(VertexId x) const noexcept { return u == x ? v : u; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted vertex triple whose three pairs are edges of some host graph.
struct Triangle {
    std::array<VertexId, 3> vertices{};

    friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// Simple undirected graph on dense ids 0..n-1.
///
/// Immutable after construction. Labels are an optional overlay: either
/// every vertex carries a unique label or none does. A label is a
/// '/'-separated path; vertices merged by gadget composition carry the
/// '='-joined labels of everything that was identified into them.
class Graph {
public:
    Graph() = default;

    /// Validates and builds. Duplicate pairs collapse; loops and
    /// out-of-range endpoints throw GraphError.
    static Graph build(std::size_t vertex_count,
                       std::span<const std::pair<VertexId, VertexId>> edges,
                       std::vector<std::string> labels = {});
    static Graph build(std::size_t vertex_count, std::span<const Edge> edges,
                       std::vector<std::string> labels = {});
    static Graph build(std::size_t vertex_count,
                       std::initializer_list<std::pair<VertexId, VertexId>> edges);

    std::size_t vertex_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Edges in ascending (u, v) order; positions are the edge indices
    /// used by witnesses and TLG bijections.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
    std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

    bool has_edge(VertexId a, VertexId b) const;
    std::optional<std::size_t> edge_index(VertexId a, VertexId b) const;

    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(VertexId v) const { return labels_.at(v); }
    /// Exact match first, then a match against any '='-separated alias.
    std::optional<VertexId> find_label(std::string_view label) const;

    Graph with_labels(std::vector<std::string> labels) const;
    Graph without_labels() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<VertexId>> adjacency_;
    std::vector<std::string> labels_;
};

/// Every 3-clique exactly once, in ascending order.
std::vector<Triangle> enumerate_triangles(const Graph& g);

/// Triangles through each edge, indexed like g.edges().
std::vector<std::size_t> triangle_counts_per_edge(const Graph& g);

bool every_edge_in_unique_triangle(const Graph& g);

struct Subgraph {
    Graph graph;
    /// New id -> id in the parent graph (ascending).
    std::vector<VertexId> to_parent;
};

/// Keeps exactly the edges with both ends in `vertices`; labels carried over.
Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

/// Splits a label into its path segments.
std::vector<std::string> label_path(std::string_view label);
/// Splits a merged label into the labels it was formed from.
std::vector<std::string> label_aliases(std::string_view label);

} // namespace trilin
