#pragma once

#include <trilin/graph.hpp>

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trilin {

/// An operator image together with the bijection it was built from.
struct TlgResult {
    Graph source;
    Graph derived;
    /// Indexed by source edge index; derived vertex ids.
    std::vector<VertexId> edge_to_vertex;
};

/// T(G): one vertex per edge of G, two adjacent iff the edges share an
/// endpoint and lie in a common triangle. Isolated vertices of G vanish.
TlgResult triangular_line_graph(const Graph& g);

/// L(G), with the same bookkeeping as triangular_line_graph.
TlgResult line_graph(const Graph& g);

/// L(G) minus the edges of T(G), on the vertex set E(G).
Graph gallai_graph(const Graph& g);

/// Candidate preimage of `target` plus an edge -> vertex bijection.
struct PreimageWitness {
    Graph target;
    Graph candidate;
    /// Indexed by candidate edge index.
    std::vector<VertexId> edge_to_vertex;
};

/// Throws CertificateError unless the map is a bijection E(candidate) ->
/// V(target); then returns whether T(candidate) matches target under it.
bool verify_certificate(const PreimageWitness& w);

/// Every triangle of `h` with an edge inside `subset` has its third vertex
/// in `subset` as well.
bool is_triangle_induced(const Graph& h, std::span<const VertexId> subset);

/// Restriction to a triangle-induced subgraph of the target. The result's
/// target is induced_subgraph(target, subset) and its candidate is the
/// subgraph of the old candidate spanned by the preimage edges of `subset`.
/// Throws StructuralError for a subset that is not triangle-induced and
/// CertificateError for a witness that does not verify.
PreimageWitness restrict_preimage(const PreimageWitness& w, std::span<const VertexId> subset);

/// Companion of restrict_preimage: restricted candidate vertex -> original
/// candidate vertex.
struct RestrictedWitness {
    PreimageWitness witness;
    std::vector<VertexId> target_to_parent;
    std::vector<VertexId> candidate_to_parent;
};
RestrictedWitness restrict_preimage_mapped(const PreimageWitness& w,
                                           std::span<const VertexId> subset);

struct LeFamily {
    /// Each member is a sorted set of target vertices.
    std::vector<std::vector<VertexId>> members;

    friend bool operator==(const LeFamily&, const LeFamily&) = default;
};

/// One member per non-isolated candidate vertex: the images of its incident
/// edges. Target vertices covered fewer than twice get singleton members
/// until they are covered twice. Throws CertificateError for a witness that
/// does not verify.
LeFamily le_family_from_preimage(const PreimageWitness& w);

/// Sorted family, usable as a key for labeled preimage classes.
LeFamily canonical_le_family(LeFamily family);

/// First violated condition of the characterization, numbered 1..4, with a
/// human readable reason; nullopt when all four hold. Never pads.
std::optional<std::pair<int, std::string>> le_family_violation(const Graph& h,
                                                               const LeFamily& family);
bool check_le_family(const Graph& h, const LeFamily& family);

/// {"target": graph, "candidate": graph, "map": [[u, v, t], ...]}. `t` may
/// be a target vertex id or a target label.
nlohmann::json witness_to_json(const PreimageWitness& w);
PreimageWitness witness_from_json(const nlohmann::json& j);

} // namespace trilin
