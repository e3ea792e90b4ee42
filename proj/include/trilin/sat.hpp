#pragma once

#include <trilin/gadgets.hpp>
#include <trilin/tlg.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trilin {

struct Literal {
    /// One-based.
    std::size_t variable = 0;
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

struct CnfFormula {
    std::size_t variable_count = 0;
    std::vector<Clause> clauses;

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// `values[i]` is x_{i+1}.
using Assignment = std::vector<bool>;

/// Throws ParseError on a missing or malformed header, a clause count that
/// disagrees with it, a clause of size other than three, a variable out of
/// range, or a variable repeated inside a clause.
CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& f);

/// Index of the first falsified clause, or nullopt.
std::optional<std::size_t> first_unsatisfied(const CnfFormula& f, const Assignment& x);

/// Sub-gadget name of large variable gadget V_{x_variable, k}.
std::string variable_gadget_name(std::size_t variable, std::size_t k);
/// Sub-gadget name of the start of the wire of x_variable, H_{x_variable, 0}.
std::string wire_start_name(std::size_t variable);

struct ReductionOutput {
    CnfFormula formula;
    GadgetBlueprint graph;
    /// For clause j (zero-based), the three large variable gadgets it joins.
    std::vector<std::array<std::string, 3>> clause_legs;
};

/// One variable cluster per variable with wire length 2m + 1, joined by one
/// clause gadget per clause. Clause j (one-based) uses V_{x,2j} for a
/// positive literal and V_{x,2j-1} for a negative one. Throws
/// StructuralError for a formula without clauses.
ReductionOutput compile(const CnfFormula& f);

/// Preimage of G_phi that realizes x: H_{x_i,0} is C7^2 when x_i = 1 and W7
/// otherwise, with the rest found by the template solver. Throws
/// UnsatisfiedClause naming the first falsified clause, and StructuralError
/// when no template assignment of G_phi extends x.
PreimageWitness witness_from_assignment(const ReductionOutput& r, const Assignment& x);

/// Reads x_i off the restriction of the witness to H_{x_i,0}. Throws
/// CertificateError when the witness does not verify against G_phi or a
/// restriction is neither W7 nor C7^2.
Assignment assignment_from_witness(const ReductionOutput& r, const PreimageWitness& w);

/// Clause wheel patterns (true = wheel) that the clause gadget on three
/// 12-suns admits, ordered lexicographically. Computed once by the template
/// solver.
const std::vector<std::array<bool, 3>>& clause_feasible_patterns();

struct DecideLimits {
    std::size_t max_vars = 20;
    /// Zero means unlimited. Counts examined assignments and template nodes.
    std::uint64_t node_budget = 0;
    std::chrono::milliseconds time_budget{0};
    unsigned workers = 1;
};

enum class DecisionStatus { Sat, Unsat, Unknown };

std::string to_string(DecisionStatus s);

struct Decision {
    DecisionStatus status = DecisionStatus::Unknown;
    Assignment assignment;
    std::optional<PreimageWitness> witness;
    std::string reason;
};

/// Enumerates variable assignments in lexicographic order (x1 most
/// significant), filters them through the clause pattern table and returns
/// the first one whose witness assembles and verifies. Unsat only after
/// every assignment has been tried. Throws GuardExceeded above max_vars.
Decision decide(const CnfFormula& f, const DecideLimits& limits = {});

/// Same, on an already compiled formula.
Decision decide(const ReductionOutput& r, const DecideLimits& limits = {});

} // namespace trilin
