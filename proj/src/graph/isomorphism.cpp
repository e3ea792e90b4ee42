#include <trilin/isomorphism.hpp>

#include <trilin/error.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace trilin {

namespace {

using Colors = std::vector<std::uint32_t>;

std::uint32_t color_count(const Colors& colors)
{
    std::uint32_t top = 0;
    for (auto c : colors)
        top = std::max(top, c + 1);
    return top;
}

/// Replace arbitrary integer keys by their ranks.
template <typename Key>
Colors rank_keys(const std::vector<Key>& keys)
{
    std::vector<std::uint32_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    Colors ranks(keys.size());
    std::uint32_t rank = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && keys[order[i]] != keys[order[i - 1]])
            ++rank;
        ranks[order[i]] = rank;
    }
    return ranks;
}

Graph disjoint_union(const Graph& a, const Graph& b)
{
    std::vector<Edge> edges(a.edges());
    auto offset = static_cast<VertexId>(a.vertex_count());
    for (const auto& e : b.edges())
        edges.emplace_back(e.u + offset, e.v + offset);
    return Graph::build(a.vertex_count() + b.vertex_count(), std::span<const Edge>(edges));
}

class IsoSearch {
public:
    IsoSearch(const Graph& from, const Graph& to, std::size_t limit)
        : from_(from), to_(to), joint_(disjoint_union(from, to)), limit_(limit)
    {
    }

    std::vector<IsoMapping> run()
    {
        if (from_.vertex_count() != to_.vertex_count() || from_.edge_count() != to_.edge_count())
            return {};
        if (limit_ == 0)
            return {};
        descend(degree_triangle_colors(joint_));
        return std::move(found_);
    }

private:
    bool balanced(const Colors& colors) const
    {
        auto top = color_count(colors);
        std::vector<long> balance(top, 0);
        std::size_t n = from_.vertex_count();
        for (std::size_t v = 0; v < colors.size(); ++v)
            balance[colors[v]] += v < n ? 1 : -1;
        return std::all_of(balance.begin(), balance.end(), [](long b) { return b == 0; });
    }

    void descend(Colors colors)
    {
        if (found_.size() >= limit_)
            return;
        colors = refine_colors(joint_, std::move(colors));
        if (!balanced(colors))
            return;
        std::size_t n = from_.vertex_count();
        auto top = color_count(colors);
        std::vector<std::size_t> size(top, 0);
        for (std::size_t v = 0; v < n; ++v)
            ++size[colors[v]];
        std::uint32_t cell = top;
        for (std::uint32_t c = 0; c < top; ++c)
            if (size[c] > 1 && (cell == top || size[c] < size[cell]))
                cell = c;
        if (cell == top) {
            IsoMapping mapping;
            mapping.forward.resize(n);
            std::vector<VertexId> image(top);
            for (std::size_t v = n; v < colors.size(); ++v)
                image[colors[v]] = static_cast<VertexId>(v - n);
            for (std::size_t v = 0; v < n; ++v)
                mapping.forward[v] = image[colors[v]];
            if (is_isomorphism(from_, to_, mapping))
                found_.push_back(std::move(mapping));
            return;
        }
        VertexId pivot = 0;
        while (colors[pivot] != cell)
            ++pivot;
        for (std::size_t w = n; w < colors.size(); ++w) {
            if (colors[w] != cell)
                continue;
            Colors next = colors;
            next[pivot] = top;
            next[w] = top;
            descend(std::move(next));
            if (found_.size() >= limit_)
                return;
        }
    }

    const Graph& from_;
    const Graph& to_;
    Graph joint_;
    std::size_t limit_;
    std::vector<IsoMapping> found_;
};

class Canonizer {
public:
    explicit Canonizer(const Graph& g) : g_(g) {}

    std::string run()
    {
        descend(degree_triangle_colors(g_), {});
        return "n=" + std::to_string(g_.vertex_count()) + ":" + best_;
    }

private:
    std::string leaf_string(const std::vector<VertexId>& order) const
    {
        std::string bits;
        std::size_t n = order.size();
        bits.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                bits.push_back(g_.has_edge(order[i], order[j]) ? '1' : '0');
        return bits;
    }

    bool fixes_path(const std::vector<VertexId>& perm, const std::vector<VertexId>& path) const
    {
        return std::all_of(path.begin(), path.end(), [&](VertexId v) { return perm[v] == v; });
    }

    void descend(Colors colors, std::vector<VertexId> path)
    {
        colors = refine_colors(g_, std::move(colors));
        auto top = color_count(colors);
        std::size_t n = g_.vertex_count();
        std::vector<std::size_t> size(top, 0);
        for (auto c : colors)
            ++size[c];
        std::uint32_t cell = top;
        for (std::uint32_t c = 0; c < top; ++c)
            if (size[c] > 1 && (cell == top || size[c] < size[cell]))
                cell = c;
        if (cell == top) {
            std::vector<VertexId> order(n);
            for (VertexId v = 0; v < n; ++v)
                order[colors[v]] = v;
            auto s = leaf_string(order);
            if (!have_best_ || s < best_) {
                best_ = std::move(s);
                best_order_ = std::move(order);
                have_best_ = true;
            } else if (s == best_) {
                // order[k] and best_order_[k] play the same role: automorphism.
                std::vector<VertexId> perm(n);
                for (std::size_t k = 0; k < n; ++k)
                    perm[order[k]] = best_order_[k];
                generators_.push_back(std::move(perm));
            }
            return;
        }
        std::vector<VertexId> tried;
        for (VertexId v = 0; v < n; ++v) {
            if (colors[v] != cell)
                continue;
            if (!tried.empty() && same_orbit(v, tried, path))
                continue;
            Colors next = colors;
            next[v] = top;
            auto next_path = path;
            next_path.push_back(v);
            descend(std::move(next), std::move(next_path));
            tried.push_back(v);
        }
    }

    bool same_orbit(VertexId v, const std::vector<VertexId>& tried,
                    const std::vector<VertexId>& path) const
    {
        std::size_t n = g_.vertex_count();
        std::vector<VertexId> parent(n);
        std::iota(parent.begin(), parent.end(), 0U);
        auto find = [&](VertexId x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        bool any = false;
        for (const auto& perm : generators_) {
            if (!fixes_path(perm, path))
                continue;
            any = true;
            for (VertexId x = 0; x < n; ++x)
                parent[find(x)] = find(perm[x]);
        }
        if (!any)
            return false;
        auto root = find(v);
        return std::any_of(tried.begin(), tried.end(), [&](VertexId u) { return find(u) == root; });
    }

    const Graph& g_;
    std::string best_;
    std::vector<VertexId> best_order_;
    bool have_best_ = false;
    std::vector<std::vector<VertexId>> generators_;
};

} // namespace

std::vector<std::uint32_t> refine_colors(const Graph& g, std::vector<std::uint32_t> colors)
{
    std::size_t n = g.vertex_count();
    if (n == 0)
        return colors;
    colors = rank_keys(colors);
    auto classes = color_count(colors);
    while (true) {
        std::vector<std::vector<std::uint32_t>> signature(n);
        for (VertexId v = 0; v < n; ++v) {
            auto& sig = signature[v];
            sig.reserve(g.degree(v) + 1);
            sig.push_back(colors[v]);
            for (auto w : g.neighbors(v))
                sig.push_back(colors[w]);
            std::sort(sig.begin() + 1, sig.end());
        }
        auto next = rank_keys(signature);
        auto next_classes = color_count(next);
        colors = std::move(next);
        if (next_classes == classes)
            return colors;
        classes = next_classes;
    }
}

std::vector<std::uint32_t> degree_triangle_colors(const Graph& g)
{
    std::vector<std::pair<std::size_t, std::size_t>> keys(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        keys[v].first = g.degree(v);
    for (const auto& t : enumerate_triangles(g))
        for (auto v : t.vertices)
            ++keys[v].second;
    return rank_keys(keys);
}

bool is_isomorphism(const Graph& from, const Graph& to, const IsoMapping& mapping)
{
    if (from.vertex_count() != to.vertex_count() || from.edge_count() != to.edge_count() ||
        mapping.forward.size() != from.vertex_count())
        return false;
    std::vector<bool> hit(to.vertex_count(), false);
    for (auto w : mapping.forward) {
        if (w >= to.vertex_count() || hit[w])
            return false;
        hit[w] = true;
    }
    return std::all_of(from.edges().begin(), from.edges().end(), [&](const Edge& e) {
        return to.has_edge(mapping.forward[e.u], mapping.forward[e.v]);
    });
}

std::optional<IsoMapping> find_isomorphism(const Graph& from, const Graph& to)
{
    auto found = IsoSearch(from, to, 1).run();
    if (found.empty())
        return std::nullopt;
    return std::move(found.front());
}

std::vector<IsoMapping> all_isomorphisms(const Graph& from, const Graph& to, std::size_t limit)
{
    return IsoSearch(from, to, limit).run();
}

std::string canonical_form(const Graph& g, std::size_t max_vertices)
{
    if (g.vertex_count() > max_vertices)
        throw CapacityError("canonical form limited to " + std::to_string(max_vertices) +
                            " vertices, graph has " + std::to_string(g.vertex_count()));
    return Canonizer(g).run();
}

} // namespace trilin
