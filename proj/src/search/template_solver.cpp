#include <trilin/error.hpp>
#include <trilin/isomorphism.hpp>
#include <trilin/template_solver.hpp>

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>

namespace trilin {

namespace {

using Member = std::vector<VertexId>;
using Family = std::vector<Member>;

struct Fragment {
    TemplateChoice choice;
    /// Labeling index among the fragments with the same choice.
    std::size_t labeling;
    Family members;
};

struct Unit {
    std::string name;
    std::string kind;
    std::vector<VertexId> vertices;
    /// Members in host ids.
    std::vector<Fragment> fragments;
};

const std::vector<Fragment>& sun_fragments(std::size_t k)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::vector<Fragment>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(k);
    if (it != cache.end())
        return it->second;

    std::vector<Fragment> out;
    auto sun = make_sun(k).graph.without_labels();
    for (auto choice : {TemplateChoice::Wheel, TemplateChoice::SquaredCycle}) {
        auto source = choice == TemplateChoice::Wheel ? make_wheel(k).graph
                                                      : make_squared_cycle(k).graph;
        auto t = triangular_line_graph(source.without_labels());
        std::set<Family> seen;
        for (const auto& iso : all_isomorphisms(t.derived, sun)) {
            Family f;
            for (VertexId v = 0; v < t.source.vertex_count(); ++v) {
                Member m;
                for (VertexId u : t.source.neighbors(v)) {
                    auto e = *t.source.edge_index(v, u);
                    m.push_back(iso.forward[t.edge_to_vertex[e]]);
                }
                if (m.empty())
                    continue;
                std::sort(m.begin(), m.end());
                f.push_back(std::move(m));
            }
            std::sort(f.begin(), f.end());
            seen.insert(std::move(f));
        }
        std::size_t index = 0;
        for (const auto& f : seen)
            out.push_back({choice, index++, f});
    }
    return cache.emplace(k, std::move(out)).first->second;
}

const std::vector<Fragment>& besun12_fragments();

std::vector<Fragment> fragments_for(const std::string& kind)
{
    if (kind == binary_enforced_sun12_kind)
        return besun12_fragments();
    if (auto k = sun_kind_size(kind))
        return sun_fragments(*k);
    throw StructuralError("no templates for unit kind " + kind);
}

Member to_host(const Member& local, const std::vector<VertexId>& vertices)
{
    Member m;
    m.reserve(local.size());
    for (VertexId v : local)
        m.push_back(vertices.at(v));
    std::sort(m.begin(), m.end());
    return m;
}

using Traces = std::vector<Member>;

Traces traces_on(const Family& f, const Member& overlap)
{
    Traces out;
    for (const auto& m : f) {
        Member t;
        std::set_intersection(m.begin(), m.end(), overlap.begin(), overlap.end(),
                              std::back_inserter(t));
        if (!t.empty())
            out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Overlap {
    std::size_t a;
    std::size_t b;
    Member vertices;
    /// Lazily filled trace multisets per fragment of each side.
    std::vector<std::optional<Traces>> traces_a;
    std::vector<std::optional<Traces>> traces_b;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
            x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

struct Solver {
    const GadgetBlueprint* gadget = nullptr;
    std::vector<Unit> units;
    std::vector<Overlap> overlaps;
    /// Overlap indices whose later unit is the key.
    std::vector<std::vector<std::size_t>> overlaps_ending_at;
    std::uint64_t node_budget = 0;
    std::uint64_t nodes = 0;

    std::vector<std::size_t> chosen;
    std::set<Family> seen_families;
    std::vector<TemplateAssignment> results;

    void charge()
    {
        if (node_budget && ++nodes > node_budget)
            throw BudgetExceeded("template search node budget exhausted");
    }

    const Traces& traces(Overlap& o, bool side_a, std::size_t fragment)
    {
        auto& slot = side_a ? o.traces_a[fragment] : o.traces_b[fragment];
        if (!slot) {
            const auto& unit = units[side_a ? o.a : o.b];
            slot = traces_on(unit.fragments[fragment].members, o.vertices);
        }
        return *slot;
    }

    void precheck()
    {
        const auto& g = gadget->graph;
        if (units.empty())
            throw StructuralError("gadget has no registered sun units");
        std::vector<std::vector<std::size_t>> by_vertex(g.vertex_count());
        for (std::size_t u = 0; u < units.size(); ++u) {
            auto k = sun_kind_size(units[u].kind);
            std::size_t expected = k ? 2 * *k : make_binary_enforced_sun(12).graph.vertex_count();
            std::set<VertexId> distinct(units[u].vertices.begin(), units[u].vertices.end());
            if (units[u].vertices.size() != expected || distinct.size() != expected
                || *distinct.rbegin() >= g.vertex_count())
                throw StructuralError("unit " + units[u].name + " of kind " + units[u].kind
                                      + " does not have " + std::to_string(expected)
                                      + " distinct vertices");
            if (!is_triangle_induced(g, units[u].vertices))
                throw StructuralError("unit " + units[u].name + " is not triangle-induced");
            for (VertexId v : units[u].vertices)
                by_vertex[v].push_back(u);
        }
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            if (by_vertex[v].empty())
                throw StructuralError("vertex " + std::to_string(v) + " lies in no unit");
        std::vector<std::set<VertexId>> unit_sets;
        for (const auto& u : units)
            unit_sets.emplace_back(u.vertices.begin(), u.vertices.end());
        for (const auto& tri : enumerate_triangles(g)) {
            auto [x, y, z] = tri.vertices;
            bool covered = std::any_of(by_vertex[x].begin(), by_vertex[x].end(), [&](std::size_t u) {
                return unit_sets[u].count(y) && unit_sets[u].count(z);
            });
            if (!covered)
                throw StructuralError("triangle (" + std::to_string(x) + ", " + std::to_string(y)
                                      + ", " + std::to_string(z) + ") lies in no unit");
        }
    }

    /// 12-sun chain units first, then breadth-first along overlaps so every
    /// later unit is checked against something already fixed.
    void order_units()
    {
        std::stable_sort(units.begin(), units.end(), [](const Unit& x, const Unit& y) {
            bool bx = x.kind == binary_enforced_sun12_kind;
            bool by = y.kind == binary_enforced_sun12_kind;
            if (bx != by)
                return bx;
            return x.name < y.name;
        });
        std::size_t n = units.size();
        std::vector<std::set<VertexId>> sets;
        for (const auto& u : units)
            sets.emplace_back(u.vertices.begin(), u.vertices.end());
        auto meets = [&](std::size_t i, std::size_t j) {
            return std::any_of(units[j].vertices.begin(), units[j].vertices.end(),
                               [&](VertexId v) { return sets[i].count(v) != 0; });
        };
        std::vector<char> placed(n, 0);
        std::vector<std::size_t> order;
        for (std::size_t seed = 0; seed < n; ++seed) {
            if (placed[seed])
                continue;
            std::deque<std::size_t> queue{seed};
            placed[seed] = 1;
            while (!queue.empty()) {
                auto cur = queue.front();
                queue.pop_front();
                order.push_back(cur);
                for (std::size_t j = 0; j < n; ++j)
                    if (!placed[j] && meets(cur, j)) {
                        placed[j] = 1;
                        queue.push_back(j);
                    }
            }
        }
        std::vector<Unit> sorted;
        for (auto i : order)
            sorted.push_back(std::move(units[i]));
        units = std::move(sorted);
    }

    void build_overlaps()
    {
        std::size_t n = units.size();
        std::vector<Member> sorted(n);
        for (std::size_t i = 0; i < n; ++i) {
            sorted[i] = units[i].vertices;
            std::sort(sorted[i].begin(), sorted[i].end());
        }
        std::vector<std::vector<std::size_t>> by_vertex(gadget->graph.vertex_count());
        for (std::size_t i = 0; i < n; ++i)
            for (VertexId v : sorted[i])
                by_vertex[v].push_back(i);
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& list : by_vertex)
            for (std::size_t x = 0; x < list.size(); ++x)
                for (std::size_t y = x + 1; y < list.size(); ++y)
                    pairs.emplace(std::min(list[x], list[y]), std::max(list[x], list[y]));
        overlaps_ending_at.assign(n, {});
        for (auto [a, b] : pairs) {
            Overlap o;
            o.a = a;
            o.b = b;
            std::set_intersection(sorted[a].begin(), sorted[a].end(), sorted[b].begin(),
                                  sorted[b].end(), std::back_inserter(o.vertices));
            o.traces_a.assign(units[a].fragments.size(), std::nullopt);
            o.traces_b.assign(units[b].fragments.size(), std::nullopt);
            overlaps_ending_at[b].push_back(overlaps.size());
            overlaps.push_back(std::move(o));
        }
    }

    void dfs(std::size_t depth)
    {
        charge();
        if (depth == units.size()) {
            assemble();
            return;
        }
        for (std::size_t f = 0; f < units[depth].fragments.size(); ++f) {
            bool ok = true;
            for (auto oi : overlaps_ending_at[depth]) {
                auto& o = overlaps[oi];
                if (traces(o, true, chosen[o.a]) != traces(o, false, f)) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            chosen[depth] = f;
            dfs(depth + 1);
        }
    }

    struct Ambiguity {
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
    };

    void assemble()
    {
        std::vector<std::size_t> offset(units.size() + 1, 0);
        for (std::size_t u = 0; u < units.size(); ++u)
            offset[u + 1] = offset[u] + units[u].fragments[chosen[u]].members.size();
        UnionFind base(offset.back());
        std::vector<Ambiguity> ambiguous;

        for (const auto& o : overlaps) {
            std::map<Member, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
            for (int side = 0; side < 2; ++side) {
                std::size_t u = side == 0 ? o.a : o.b;
                const auto& members = units[u].fragments[chosen[u]].members;
                for (std::size_t m = 0; m < members.size(); ++m) {
                    Member t;
                    std::set_intersection(members[m].begin(), members[m].end(), o.vertices.begin(),
                                          o.vertices.end(), std::back_inserter(t));
                    if (t.empty())
                        continue;
                    auto& g = groups[t];
                    (side == 0 ? g.first : g.second).push_back(offset[u] + m);
                }
            }
            for (auto& [trace, g] : groups) {
                if (g.first.size() != g.second.size())
                    return;
                if (g.first.size() == 1)
                    base.unite(g.first[0], g.second[0]);
                else
                    ambiguous.push_back({g.first, g.second});
            }
        }
        branch(base, ambiguous, 0, offset);
    }

    void branch(UnionFind uf, const std::vector<Ambiguity>& ambiguous, std::size_t index,
                const std::vector<std::size_t>& offset)
    {
        charge();
        if (index == ambiguous.size()) {
            emit(uf, offset);
            return;
        }
        const auto& amb = ambiguous[index];
        std::vector<std::size_t> perm(amb.right.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            UnionFind next = uf;
            for (std::size_t i = 0; i < perm.size(); ++i)
                next.unite(amb.left[i], amb.right[perm[i]]);
            branch(std::move(next), ambiguous, index + 1, offset);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    void emit(UnionFind& uf, const std::vector<std::size_t>& offset)
    {
        const auto& g = gadget->graph;
        std::map<std::size_t, std::set<VertexId>> classes;
        for (std::size_t u = 0; u < units.size(); ++u) {
            const auto& members = units[u].fragments[chosen[u]].members;
            for (std::size_t m = 0; m < members.size(); ++m)
                classes[uf.find(offset[u] + m)].insert(members[m].begin(), members[m].end());
        }
        std::vector<std::vector<VertexId>> ends(g.vertex_count());
        VertexId id = 0;
        for (const auto& [root, verts] : classes) {
            for (VertexId t : verts)
                ends[t].push_back(id);
            ++id;
        }
        std::vector<Edge> edges;
        for (const auto& e : ends) {
            if (e.size() != 2)
                return;
            edges.emplace_back(e[0], e[1]);
        }
        PreimageWitness w;
        w.target = g;
        w.candidate = Graph::build(classes.size(), std::span<const Edge>(edges));
        if (w.candidate.edge_count() != g.vertex_count())
            return;
        w.edge_to_vertex.assign(g.vertex_count(), 0);
        for (VertexId t = 0; t < g.vertex_count(); ++t)
            w.edge_to_vertex[*w.candidate.edge_index(ends[t][0], ends[t][1])] = t;
        if (!verify_certificate(w))
            return;

        Family key;
        for (const auto& [root, verts] : classes)
            key.emplace_back(verts.begin(), verts.end());
        std::sort(key.begin(), key.end());
        if (!seen_families.insert(std::move(key)).second)
            return;

        TemplateAssignment a;
        for (std::size_t u = 0; u < units.size(); ++u) {
            const auto& f = units[u].fragments[chosen[u]];
            a.units.push_back({units[u].name, units[u].kind, f.choice, f.labeling});
        }
        std::sort(a.units.begin(), a.units.end(),
                  [](const UnitChoice& x, const UnitChoice& y) { return x.unit < y.unit; });
        a.witness = std::move(w);
        results.push_back(std::move(a));
    }
};

std::vector<Unit> units_of(const GadgetBlueprint& gadget)
{
    std::vector<Unit> units;
    for (const auto& [name, piece] : gadget.sub_gadgets)
        if (piece.kind == binary_enforced_sun12_kind || sun_kind_size(piece.kind))
            units.push_back({name, piece.kind, piece.vertices, {}});
    if (units.empty() && sun_kind_size(gadget.kind)) {
        std::vector<VertexId> all(gadget.graph.vertex_count());
        std::iota(all.begin(), all.end(), 0U);
        units.push_back({gadget.kind, gadget.kind, std::move(all), {}});
    }
    return units;
}

std::vector<TemplateAssignment> solve(const GadgetBlueprint& gadget, const TemplateOptions& options)
{
    Solver s;
    s.gadget = &gadget;
    s.units = units_of(gadget);
    s.node_budget = options.node_budget;
    s.precheck();
    for (const auto& [name, choice] : options.forced)
        if (std::none_of(s.units.begin(), s.units.end(), [&](const Unit& u) { return u.name == name; }))
            throw StructuralError("forced choice for unknown unit " + name);
    for (auto& u : s.units) {
        auto forced = options.forced.find(u.name);
        for (const auto& f : fragments_for(u.kind)) {
            if (forced != options.forced.end() && f.choice != forced->second)
                continue;
            Family host;
            for (const auto& m : f.members)
                host.push_back(to_host(m, u.vertices));
            std::sort(host.begin(), host.end());
            u.fragments.push_back({f.choice, f.labeling, std::move(host)});
        }
    }
    s.order_units();
    s.build_overlaps();
    s.chosen.assign(s.units.size(), 0);
    s.dfs(0);

    auto rank = [](const TemplateAssignment& a) {
        std::vector<std::pair<int, std::size_t>> key;
        for (const auto& u : a.units)
            key.emplace_back(static_cast<int>(u.choice), u.labeling);
        return key;
    };
    std::stable_sort(s.results.begin(), s.results.end(),
                     [&](const TemplateAssignment& x, const TemplateAssignment& y) {
                         return rank(x) < rank(y);
                     });
    return std::move(s.results);
}

const std::vector<Fragment>& besun12_fragments()
{
    static const std::vector<Fragment> fragments = [] {
        auto chain = make_binary_enforced_sun(12);
        std::vector<Fragment> out;
        std::map<TemplateChoice, std::size_t> counters;
        for (const auto& a : solve(chain, {})) {
            auto choice = *a.choice_of("sun7_1");
            auto family = canonical_le_family(le_family_from_preimage(a.witness)).members;
            out.push_back({choice, counters[choice]++, std::move(family)});
        }
        return out;
    }();
    return fragments;
}

} // namespace

std::string to_string(TemplateChoice c)
{
    return c == TemplateChoice::Wheel ? "wheel" : "squared-cycle";
}

std::optional<TemplateChoice> TemplateAssignment::choice_of(const std::string& unit) const
{
    for (const auto& u : units)
        if (u.unit == unit)
            return u.choice;
    return std::nullopt;
}

std::vector<TemplateAssignment> template_solve(const GadgetBlueprint& gadget,
                                               const TemplateOptions& options)
{
    return solve(gadget, options);
}

std::vector<std::string> template_units(const GadgetBlueprint& gadget)
{
    Solver s;
    s.gadget = &gadget;
    s.units = units_of(gadget);
    s.order_units();
    std::vector<std::string> out;
    for (const auto& u : s.units)
        out.push_back(u.name);
    return out;
}

} // namespace trilin
