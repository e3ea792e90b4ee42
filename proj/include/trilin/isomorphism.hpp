#pragma once

#include <trilin/graph.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace trilin {

/// Vertex bijection from one graph onto another.
struct IsoMapping {
    std::vector<VertexId> forward;

    friend bool operator==(const IsoMapping&, const IsoMapping&) = default;
};

inline constexpr std::size_t default_canonical_limit = 32;

/// Equitable colour refinement seeded with `colors`. Colours of the result
/// are ranks of refinement signatures, so they are invariant under
/// relabelling of the graph.
std::vector<std::uint32_t> refine_colors(const Graph& g, std::vector<std::uint32_t> colors);

/// Seed colouring by (degree, triangles through the vertex).
std::vector<std::uint32_t> degree_triangle_colors(const Graph& g);

bool is_isomorphism(const Graph& from, const Graph& to, const IsoMapping& mapping);

/// Backtracking with individualisation and joint refinement. Deterministic.
std::optional<IsoMapping> find_isomorphism(const Graph& from, const Graph& to);

std::vector<IsoMapping> all_isomorphisms(const Graph& from, const Graph& to,
                                         std::size_t limit = std::numeric_limits<std::size_t>::max());

inline std::vector<IsoMapping> automorphisms(const Graph& g)
{
    return all_isomorphisms(g, g);
}

/// Minimal upper-triangle adjacency string over refinement-pruned
/// orderings. Equal strings iff isomorphic. Throws CapacityError when the
/// graph has more than `max_vertices` vertices.
std::string canonical_form(const Graph& g, std::size_t max_vertices = default_canonical_limit);

} // namespace trilin
