#include <trilin/error.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/search.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace trilin {

namespace {

using Family = std::vector<std::vector<VertexId>>;
constexpr int none = -1;

struct Shared {
    std::uint64_t node_budget = 0;
    std::chrono::steady_clock::time_point deadline{};
    bool has_deadline = false;
    bool first_only = false;

    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> exhausted{false};
    std::string exhausted_reason;
    std::mutex mutex;
    std::set<Family> families;
    /// First-hit mode: the first family found in each subtree, by subtree
    /// index in sequential visiting order.
    std::map<std::size_t, Family> first_hits;
    std::atomic<std::size_t> best_subtree{static_cast<std::size_t>(-1)};

    void run_out(const std::string& reason)
    {
        std::lock_guard lock(mutex);
        if (!exhausted.exchange(true))
            exhausted_reason = reason;
        stop = true;
    }
};

/// Assigns each target vertex an unordered pair of candidate vertices in BFS
/// order. Candidate vertices are numbered by first use, and two vertices
/// introduced together stay interchangeable until one of them is reused, so
/// only the smaller of such twins is tried.
struct Search {
    const Graph* h = nullptr;
    std::size_t n = 0;
    std::size_t cap = 0;
    std::vector<char> adj;
    std::vector<VertexId> order;
    std::vector<std::size_t> pos;

    std::vector<std::pair<int, int>> pair_of;
    std::vector<int> owner;
    std::vector<std::vector<VertexId>> incident;
    std::vector<int> twin;
    std::size_t used = 0;
    std::size_t depth = 0;

    Shared* shared = nullptr;
    std::uint64_t local_nodes = 0;
    std::size_t subtree = 0;
    bool done = false;

    bool halted() const { return done || shared->stop.load(std::memory_order_relaxed); }

    bool adjacent(std::size_t s, std::size_t t) const { return adj[s * n + t] != 0; }
    int& owner_of(int a, int b) { return owner[static_cast<std::size_t>(std::min(a, b)) * cap + std::max(a, b)]; }

    void init(const Graph& g, std::size_t candidate_cap)
    {
        h = &g;
        n = g.vertex_count();
        cap = candidate_cap;
        adj.assign(n * n, 0);
        for (const auto& e : g.edges()) {
            adj[e.u * n + e.v] = 1;
            adj[e.v * n + e.u] = 1;
        }
        pos.assign(n, 0);
        std::vector<char> seen(n, 0);
        for (VertexId root = 0; root < n; ++root) {
            if (seen[root])
                continue;
            seen[root] = 1;
            std::size_t head = order.size();
            order.push_back(root);
            while (head < order.size()) {
                VertexId x = order[head++];
                for (VertexId y : g.neighbors(x))
                    if (!seen[y]) {
                        seen[y] = 1;
                        order.push_back(y);
                    }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            pos[order[i]] = i;
        pair_of.assign(n, {none, none});
        owner.assign(cap * cap, none);
        incident.assign(cap, {});
        twin.assign(cap, none);
    }

    bool pending_triangle_possible(std::size_t s, std::size_t t) const
    {
        for (std::size_t r = 0; r < n; ++r)
            if (r != s && r != t && pair_of[r].first == none && adjacent(r, s) && adjacent(r, t))
                return true;
        return false;
    }

    bool can_assign(VertexId t, int a, int b)
    {
        if (owner_of(a, b) != none)
            return false;
        for (VertexId s : h->neighbors(t)) {
            auto [p, q] = pair_of[s];
            if (p == none)
                continue;
            if (p != a && p != b && q != a && q != b)
                return false;
        }
        for (int side = 0; side < 2; ++side) {
            int x = side == 0 ? a : b;
            int z = side == 0 ? b : a;
            for (VertexId s : incident[static_cast<std::size_t>(x)]) {
                auto [p, q] = pair_of[s];
                int y = p == x ? q : p;
                int r = owner_of(y, z);
                bool st = adjacent(s, t);
                if (r != none) {
                    if (!st || !adjacent(static_cast<std::size_t>(r), s)
                        || !adjacent(static_cast<std::size_t>(r), t))
                        return false;
                } else if (st && !pending_triangle_possible(s, t)) {
                    return false;
                }
            }
        }
        return true;
    }

    struct Undo {
        std::size_t used;
        std::vector<std::pair<std::size_t, int>> twins;
    };

    void set_twin(Undo& u, std::size_t v, int value)
    {
        u.twins.emplace_back(v, twin[v]);
        twin[v] = value;
    }

    Undo assign(VertexId t, int a, int b)
    {
        Undo u{used, {}};
        auto ua = static_cast<std::size_t>(a);
        auto ub = static_cast<std::size_t>(b);
        bool fresh_pair = ua == used;
        for (std::size_t v : {ua, ub}) {
            int w = twin[v];
            if (w != none) {
                set_twin(u, static_cast<std::size_t>(w), none);
                set_twin(u, v, none);
            }
        }
        used = std::max(used, ub + 1);
        if (fresh_pair) {
            set_twin(u, ua, b);
            set_twin(u, ub, a);
        }
        pair_of[t] = {a, b};
        owner_of(a, b) = static_cast<int>(t);
        incident[ua].push_back(t);
        incident[ub].push_back(t);
        ++depth;
        return u;
    }

    void unassign(VertexId t, const Undo& u)
    {
        auto [a, b] = pair_of[t];
        --depth;
        incident[static_cast<std::size_t>(a)].pop_back();
        incident[static_cast<std::size_t>(b)].pop_back();
        owner_of(a, b) = none;
        pair_of[t] = {none, none};
        for (auto it = u.twins.rbegin(); it != u.twins.rend(); ++it)
            twin[it->first] = it->second;
        used = u.used;
    }

    /// A pair that uses exactly one of two untouched twins must use the
    /// smaller one.
    bool breaks_twin_symmetry(int a, int b) const
    {
        for (int v : {a, b}) {
            if (static_cast<std::size_t>(v) >= used)
                continue;
            int w = twin[static_cast<std::size_t>(v)];
            if (w != none && w != a && w != b && w < v)
                return true;
        }
        return false;
    }

    std::vector<std::pair<int, int>> options(VertexId t) const
    {
        std::vector<std::pair<int, int>> out;
        int fresh = static_cast<int>(used);
        int limit = static_cast<int>(cap);
        const std::pair<int, int>* anchor = nullptr;
        std::size_t best = n;
        for (VertexId s : h->neighbors(t))
            if (pair_of[s].first != none && pos[s] < best) {
                best = pos[s];
                anchor = &pair_of[s];
            }
        if (anchor) {
            for (int x : {anchor->first, anchor->second})
                for (int y = 0; y <= fresh && y < limit; ++y)
                    if (y != x)
                        out.emplace_back(std::min(x, y), std::max(x, y));
        } else {
            for (int a = 0; a <= fresh && a < limit; ++a) {
                int top = a < fresh ? fresh : fresh + 1;
                for (int b = a + 1; b <= top && b < limit; ++b)
                    out.emplace_back(a, b);
            }
        }
        return out;
    }

    bool tick()
    {
        // Exact accounting under a node budget, batched otherwise.
        std::uint64_t step = shared->node_budget ? 1 : 256;
        if (++local_nodes % step != 0)
            return !halted();
        auto total = shared->nodes.fetch_add(step) + step;
        if (shared->node_budget && total > shared->node_budget) {
            shared->run_out("node budget exhausted");
            return false;
        }
        if (shared->has_deadline && std::chrono::steady_clock::now() > shared->deadline) {
            shared->run_out("time budget exhausted");
            return false;
        }
        return !halted();
    }

    Family family() const
    {
        Family members(used);
        for (std::size_t v = 0; v < used; ++v) {
            members[v] = incident[v];
            std::sort(members[v].begin(), members[v].end());
        }
        std::sort(members.begin(), members.end());
        return members;
    }

    void leaf()
    {
        auto members = family();
        std::lock_guard lock(shared->mutex);
        if (shared->first_only) {
            shared->first_hits.emplace(subtree, std::move(members));
            auto best = shared->best_subtree.load();
            while (subtree < best && !shared->best_subtree.compare_exchange_weak(best, subtree)) {
            }
            done = true;
            return;
        }
        shared->families.insert(std::move(members));
    }

    void dfs()
    {
        if (!tick())
            return;
        if (depth == n) {
            leaf();
            return;
        }
        VertexId t = order[depth];
        for (auto [a, b] : options(t)) {
            if (breaks_twin_symmetry(a, b) || !can_assign(t, a, b))
                continue;
            auto undo = assign(t, a, b);
            dfs();
            unassign(t, undo);
            if (halted())
                return;
        }
    }

    /// Children of the current node in the order dfs() would visit them.
    std::vector<Search> expand()
    {
        std::vector<Search> out;
        VertexId t = order[depth];
        for (auto [a, b] : options(t)) {
            if (breaks_twin_symmetry(a, b) || !can_assign(t, a, b))
                continue;
            auto undo = assign(t, a, b);
            out.push_back(*this);
            unassign(t, undo);
        }
        return out;
    }
};

PreimageWitness witness_from_family(const Graph& h, const Family& family)
{
    std::vector<std::vector<VertexId>> ends(h.vertex_count());
    for (std::size_t m = 0; m < family.size(); ++m)
        for (VertexId t : family[m])
            ends[t].push_back(static_cast<VertexId>(m));
    std::vector<Edge> edges;
    for (VertexId t = 0; t < h.vertex_count(); ++t) {
        if (ends[t].size() != 2)
            throw CertificateError("family does not cover a target vertex exactly twice");
        edges.push_back({ends[t][0], ends[t][1]});
    }
    PreimageWitness w;
    w.target = h;
    w.candidate = Graph::build(family.size(), edges);
    if (w.candidate.edge_count() != h.vertex_count())
        throw CertificateError("family induces parallel edges");
    w.edge_to_vertex.assign(h.vertex_count(), 0);
    for (VertexId t = 0; t < h.vertex_count(); ++t)
        w.edge_to_vertex[*w.candidate.edge_index(ends[t][0], ends[t][1])] = t;
    return w;
}

std::set<Family> run_search(const Graph& h, const SearchLimits& limits, bool first_only,
                            std::string* budget_reason)
{
    if (h.vertex_count() > limits.max_target_vertices)
        throw CapacityError("target has " + std::to_string(h.vertex_count())
                            + " vertices, above the cap of "
                            + std::to_string(limits.max_target_vertices));
    Shared shared;
    shared.node_budget = limits.node_budget;
    shared.first_only = first_only;
    if (limits.time_budget.count() > 0) {
        shared.has_deadline = true;
        shared.deadline = std::chrono::steady_clock::now() + limits.time_budget;
    }

    Search root;
    std::size_t cap = limits.max_candidate_vertices ? limits.max_candidate_vertices
                                                    : 2 * h.vertex_count();
    root.init(h, std::max<std::size_t>(cap, 1));
    root.shared = &shared;

    unsigned workers = std::max(1U, limits.workers);
    if (workers == 1 || h.vertex_count() < 4) {
        root.dfs();
    } else {
        // Breadth-first split until there is enough work to share, then hand
        // out subtrees in their sequential order.
        std::vector<Search> frontier{root};
        while (frontier.size() < 8 * workers) {
            std::vector<Search> next;
            bool grew = false;
            for (auto& node : frontier) {
                if (node.depth == node.n) {
                    next.push_back(std::move(node));
                    continue;
                }
                auto children = node.expand();
                grew = true;
                for (auto& c : children)
                    next.push_back(std::move(c));
            }
            frontier = std::move(next);
            if (!grew || frontier.empty())
                break;
        }
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = cursor.fetch_add(1);
                    if (i >= frontier.size() || shared.stop)
                        return;
                    if (first_only && i > shared.best_subtree.load())
                        continue;
                    frontier[i].shared = &shared;
                    frontier[i].subtree = i;
                    frontier[i].dfs();
                }
            });
        for (auto& t : pool)
            t.join();
    }

    if (first_only && !shared.first_hits.empty())
        shared.families.insert(shared.first_hits.begin()->second);
    if (shared.exhausted && shared.families.empty()) {
        if (budget_reason) {
            *budget_reason = shared.exhausted_reason;
            return {};
        }
        throw BudgetExceeded(shared.exhausted_reason);
    }
    return std::move(shared.families);
}

} // namespace

std::vector<PreimageWitness> brute_force_preimages(const Graph& h, const SearchLimits& limits)
{
    auto families = run_search(h, limits, false, nullptr);
    std::size_t canon_cap = std::max<std::size_t>(default_canonical_limit, 2 * h.vertex_count());
    std::map<std::string, PreimageWitness> classes;
    for (const auto& f : families) {
        auto w = witness_from_family(h, f);
        if (!verify_certificate(w))
            throw CertificateError("internal: search produced an invalid preimage");
        classes.try_emplace(canonical_form(w.candidate, canon_cap), std::move(w));
    }
    std::vector<PreimageWitness> out;
    for (auto& [key, w] : classes)
        out.push_back(std::move(w));
    return out;
}

std::size_t count_labeled_preimages(const Graph& h, const SearchLimits& limits)
{
    return run_search(h, limits, false, nullptr).size();
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Yes:
        return "YES";
    case Verdict::No:
        return "NO";
    case Verdict::Unknown:
        break;
    }
    return "UNKNOWN";
}

TlgDecision is_tlg_small(const Graph& h, const SearchLimits& limits)
{
    TlgDecision d;
    std::string reason;
    auto families = run_search(h, limits, true, &reason);
    if (!reason.empty()) {
        d.verdict = Verdict::Unknown;
        d.reason = reason;
        return d;
    }
    if (families.empty() && limits.max_candidate_vertices
        && limits.max_candidate_vertices < 2 * h.vertex_count()) {
        d.verdict = Verdict::Unknown;
        d.reason = "candidate vertex cap below 2 |V(h)|";
        return d;
    }
    if (families.empty()) {
        d.verdict = Verdict::No;
        return d;
    }
    auto w = witness_from_family(h, *families.begin());
    if (!verify_certificate(w))
        throw CertificateError("internal: search produced an invalid preimage");
    d.verdict = Verdict::Yes;
    d.witness = std::move(w);
    return d;
}

} // namespace trilin
