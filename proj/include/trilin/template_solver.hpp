#pragma once

#include <trilin/gadgets.hpp>
#include <trilin/tlg.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trilin {

enum class TemplateChoice { Wheel, SquaredCycle };

std::string to_string(TemplateChoice c);

/// Choice made for one registered binary unit (a 7-sun or a binary-enforced
/// 12-sun). `labeling` indexes the unit's labeled fragments for that choice.
struct UnitChoice {
    std::string unit;
    std::string kind;
    TemplateChoice choice = TemplateChoice::Wheel;
    std::size_t labeling = 0;

    friend bool operator==(const UnitChoice&, const UnitChoice&) = default;
};

struct TemplateAssignment {
    /// Sorted by unit name.
    std::vector<UnitChoice> units;
    PreimageWitness witness;

    std::optional<TemplateChoice> choice_of(const std::string& unit) const;
};

struct TemplateOptions {
    /// Zero means unlimited. Counts search nodes plus leaf assemblies.
    std::uint64_t node_budget = 0;
    /// Units listed here only take the given choice.
    std::map<std::string, TemplateChoice> forced;
};

/// All preimages of the gadget assembled from per-unit fragments. The units
/// are the registered sub-gadgets of kind "sun<k>" and
/// "binary-enforced-sun12", or the gadget itself when it is a bare sun.
/// Fragments are the Le families of the wheel and squared-cycle preimages of
/// each unit; the 12-sun chain templates are themselves solved from their
/// 7-suns. Fragments of overlapping units must leave identical traces on the
/// overlap, and each surviving combination is glued, verified and kept once
/// per Le family. Results are ordered by their unit choices.
///
/// Throws StructuralError when a triangle of the gadget lies in no unit or a
/// unit is not triangle-induced, and BudgetExceeded when the node budget
/// runs out.
std::vector<TemplateAssignment> template_solve(const GadgetBlueprint& gadget,
                                               const TemplateOptions& options = {});

/// The unit names template_solve would use, in search order.
std::vector<std::string> template_units(const GadgetBlueprint& gadget);

} // namespace trilin
