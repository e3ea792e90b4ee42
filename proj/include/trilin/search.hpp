#pragma once

#include <trilin/graph.hpp>
#include <trilin/tlg.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trilin {

struct SearchLimits {
    std::size_t max_target_vertices = 16;
    /// 0 means 2 * |V(h)|, which never cuts off a preimage.
    std::size_t max_candidate_vertices = 0;
    /// Zero durations and budgets mean unlimited.
    std::chrono::milliseconds time_budget{0};
    std::uint64_t node_budget = 0;
    unsigned workers = 1;
};

/// One witness per isomorphism class of preimages of `h`, ordered by the
/// canonical form of the candidate. Within a class the witness with the
/// smallest canonical Le family is reported, so the output does not depend
/// on the worker count. An empty result means `h` is not a triangular line
/// graph. Throws CapacityError when `h` is over the size cap and
/// BudgetExceeded when a budget runs out before the search completes.
std::vector<PreimageWitness> brute_force_preimages(const Graph& h, const SearchLimits& limits);

/// Certified bijections counted up to relabelling of the candidate graph.
std::size_t count_labeled_preimages(const Graph& h, const SearchLimits& limits);

enum class Verdict { Yes, No, Unknown };

std::string to_string(Verdict v);

struct TlgDecision {
    Verdict verdict = Verdict::Unknown;
    std::optional<PreimageWitness> witness;
    /// Set for Unknown: which budget ran out.
    std::string reason;
};

/// Stops at the first preimage. Never reports No after a budget ran out.
TlgDecision is_tlg_small(const Graph& h, const SearchLimits& limits);

} // namespace trilin
