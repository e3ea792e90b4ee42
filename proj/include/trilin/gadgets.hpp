#pragma once

#include <trilin/graph.hpp>
#include <trilin/tlg.hpp>

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trilin {

/// A registered piece of a larger gadget. `vertices[i]` is the host id of
/// the piece's local vertex i, so the piece can be rebuilt with its own
/// local numbering.
struct SubGadget {
    std::string kind;
    std::vector<VertexId> vertices;

    friend bool operator==(const SubGadget&, const SubGadget&) = default;
};

/// Graph plus named roles. Bowtie roles are five ids
/// {center, t1-cycle, t1-apex, t2-cycle, t2-apex}.
struct GadgetBlueprint {
    Graph graph;
    std::string kind;
    std::map<std::string, std::vector<VertexId>> roles;
    std::map<std::string, SubGadget> sub_gadgets;
    std::map<std::string, std::string> attributes;

    const std::vector<VertexId>& role(const std::string& name) const;
    bool has_role(const std::string& name) const { return roles.count(name) != 0; }
    const SubGadget& sub_gadget(const std::string& name) const;

    friend bool operator==(const GadgetBlueprint&, const GadgetBlueprint&) = default;
};

enum class AttachmentPoint { Root, Equal, Not };

std::string attachment_role(AttachmentPoint point);

/// Sun size of a kind tag "sun<k>", or nullopt.
std::optional<std::size_t> sun_kind_size(const std::string& kind);
std::string sun_kind(std::size_t k);
inline const std::string binary_enforced_sun12_kind = "binary-enforced-sun12";

GadgetBlueprint make_bowtie();
GadgetBlueprint make_double_triangle();
GadgetBlueprint make_fan(std::size_t k);
GadgetBlueprint make_triangle_strip(std::size_t k);
GadgetBlueprint make_wheel(std::size_t k);
GadgetBlueprint make_squared_cycle(std::size_t k);

/// Vertex 2i is cycle vertex v_{i+1}, vertex 2i+1 the apex on v_{i+1}v_{i+2}.
/// Labels are the local ids. For k = 12 the clause attachment triangles are
/// tagged "a-triangle" = (0, 2, 1) and "b-triangle" = (12, 14, 13).
GadgetBlueprint make_sun(std::size_t k);

/// Sun plus, for every i, the chain v_{i+4} - w1 - w2 - v_i with one apex
/// per chain edge. Registers the k embedded 7-suns as "sun7_<i>".
GadgetBlueprint make_binary_enforced_sun(std::size_t k);

/// Tags ROOT, EQUAL and NOT bowties on a 7-sun. Throws StructuralError for
/// anything else.
GadgetBlueprint designate_attachments(GadgetBlueprint sun7);

/// Checks that the five ids are distinct and induce exactly two triangles
/// meeting only at the center. Throws StructuralError describing the defect.
void check_bowtie(const Graph& g, const std::vector<VertexId>& bowtie);

GadgetBlueprint attach_equal(const GadgetBlueprint& a, const std::string& bowtie_a,
                             const GadgetBlueprint& b, const std::string& bowtie_b);
GadgetBlueprint attach_not(const GadgetBlueprint& a, const std::string& bowtie_a,
                           const GadgetBlueprint& b, const std::string& bowtie_b);

/// H_0 .. H_k joined NOT(H_{i-1}, H_i's ROOT).
GadgetBlueprint make_wire(std::size_t length);

/// Binary-enforced 12-sun with H' = "sun7_1" and its EQUAL bowtie tagged
/// "H'/EQUAL".
GadgetBlueprint make_large_variable_gadget(std::size_t variable, std::size_t index);

/// Wire H_0..H_{2m} plus V_1..V_{2m}, V_j's H' joined by EQUAL to H_j.
GadgetBlueprint make_variable_cluster(std::size_t variable, std::size_t m);

/// V_j stores x_i when j is even and its negation when j is odd.
bool cluster_tap_is_negated(std::size_t j);

/// Cyclic identification of a/b triangles across three gadgets, prefixed
/// "S1", "S2", "S3".
GadgetBlueprint join_clause(const GadgetBlueprint& g1, const GadgetBlueprint& g2,
                            const GadgetBlueprint& g3);

/// Rebuilds a registered piece with its local numbering. Roles of the host
/// whose name starts with "<name>/" are carried over, translated.
GadgetBlueprint extract_sub_gadget(const GadgetBlueprint& host, const std::string& name);

/// Role invariants: ids in range, bowties well formed, sub-gadget ids in
/// range. Throws StructuralError.
void validate_blueprint(const GadgetBlueprint& bp);

/// Merged labels compare as sets of aliases.
bool same_labeled_graph(const Graph& a, const Graph& b);

nlohmann::json blueprint_to_json(const GadgetBlueprint& bp);
GadgetBlueprint blueprint_from_json(const nlohmann::json& j);

/// Builds gadgets from parts by identifying vertices. Parts keep their
/// roles, labels and registries under "<prefix>/"; a part whose own kind is
/// a sun or binary-enforced sun is itself registered under its prefix.
class GadgetComposer {
public:
    std::size_t add(const std::string& prefix, const GadgetBlueprint& part);
    void identify(std::size_t part_a, VertexId a, std::size_t part_b, VertexId b);
    /// Identification by role entries.
    void identify_role(std::size_t part_a, const std::string& role_a, std::size_t index_a,
                       std::size_t part_b, const std::string& role_b, std::size_t index_b);
    const GadgetBlueprint& part(std::size_t index) const { return parts_.at(index).blueprint; }
    GadgetBlueprint finish(std::string kind) const;

private:
    struct Part {
        std::string prefix;
        GadgetBlueprint blueprint;
        std::size_t offset;
    };
    std::size_t find(std::size_t slot) const;

    std::vector<Part> parts_;
    mutable std::vector<std::size_t> parent_;
};

/// Composer-level joins used by the constructors above. Roles are looked up
/// on the named parts.
void compose_equal(GadgetComposer& c, std::size_t part_a, const std::string& bowtie_a,
                   std::size_t part_b, const std::string& bowtie_b);
void compose_not(GadgetComposer& c, std::size_t part_a, const std::string& bowtie_a,
                 std::size_t part_b, const std::string& bowtie_b);

/// One clause leg: a part plus the role prefix under which its a/b
/// triangles live ("" for a bare sun, "V2/" inside a cluster).
struct ClauseLeg {
    std::size_t part;
    std::string role_prefix;
};
void compose_clause(GadgetComposer& c, const std::array<ClauseLeg, 3>& legs);

} // namespace trilin
