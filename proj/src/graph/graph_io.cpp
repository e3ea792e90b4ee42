#include <trilin/graph_io.hpp>

#include <trilin/error.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace trilin {

namespace {

std::string_view trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_id(std::string_view token, VertexId& out)
{
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

std::string escape_dot(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

Graph parse_edge_list(std::string_view text)
{
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::optional<std::size_t> declared;
    std::size_t line_no = 0;
    std::size_t top = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        auto hash = line.find('#');
        if (hash != std::string_view::npos) {
            auto comment = trim(line.substr(hash + 1));
            if (comment.starts_with("n=")) {
                VertexId n = 0;
                if (!parse_id(trim(comment.substr(2)), n))
                    throw ParseError("bad vertex count directive", line_no);
                declared = n;
            }
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty())
            continue;

        std::vector<std::string_view> tokens;
        while (!line.empty()) {
            auto end = line.find_first_of(" \t");
            tokens.push_back(line.substr(0, end));
            line = end == std::string_view::npos ? std::string_view{} : trim(line.substr(end));
        }
        VertexId u = 0, v = 0;
        if (tokens.size() != 2 || !parse_id(tokens[0], u) || !parse_id(tokens[1], v))
            throw ParseError("expected two vertex ids", line_no);
        if (u == v)
            throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
        edges.emplace_back(u, v);
        top = std::max<std::size_t>(top, std::max(u, v) + 1);
    }
    std::size_t n = declared.value_or(top);
    if (n < top)
        throw ParseError("vertex count directive n=" + std::to_string(n) +
                             " is smaller than the largest id", 0);
    return Graph::build(n, std::span<const std::pair<VertexId, VertexId>>(edges));
}

std::string to_edge_list(const Graph& g)
{
    std::ostringstream out;
    out << "# n=" << g.vertex_count() << "\n";
    for (const auto& e : g.edges())
        out << e.u << ' ' << e.v << "\n";
    return out.str();
}

Graph graph_from_json(const nlohmann::json& j)
{
    try {
        if (!j.is_object())
            throw ParseError("graph JSON must be an object", 0);
        auto n = j.at("n").get<std::size_t>();
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("edge entries must be [u, v] pairs", 0);
            edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
        }
        std::vector<std::string> labels;
        if (j.contains("labels") && !j.at("labels").empty()) {
            labels.resize(n);
            std::vector<bool> seen(n, false);
            for (const auto& [key, value] : j.at("labels").items()) {
                VertexId id = 0;
                if (!parse_id(key, id) || id >= n)
                    throw ParseError("label key '" + key + "' is not a vertex id", 0);
                labels[id] = value.get<std::string>();
                seen[id] = true;
            }
            if (std::find(seen.begin(), seen.end(), false) != seen.end())
                throw ParseError("labels must cover every vertex or none", 0);
        }
        return Graph::build(n, std::span<const std::pair<VertexId, VertexId>>(edges),
                            std::move(labels));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed graph JSON: ") + ex.what(), 0);
    } catch (const GraphError& ex) {
        throw ParseError(ex.what(), 0);
    }
}

nlohmann::json graph_to_json(const Graph& g)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v});
    nlohmann::json labels = nlohmann::json::object();
    if (g.has_labels())
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            labels[std::to_string(v)] = g.label(v);
    return {{"n", g.vertex_count()}, {"edges", std::move(edges)}, {"labels", std::move(labels)}};
}

Graph parse_graph_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ParseError(std::string("invalid JSON: ") + ex.what(), 0);
    }
    return graph_from_json(j);
}

std::string to_dot(const Graph& g, std::string_view name)
{
    std::ostringstream out;
    out << "graph \"" << escape_dot(name) << "\" {\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        out << "  " << v;
        if (g.has_labels())
            out << " [label=\"" << escape_dot(g.label(v)) << "\"]";
        out << ";\n";
    }
    for (const auto& e : g.edges())
        out << "  " << e.u << " -- " << e.v << ";\n";
    out << "}\n";
    return out.str();
}

Graph parse_graph(std::string_view text)
{
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{')
        return parse_graph_json(text);
    return parse_edge_list(text);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out)
        throw Error("write to '" + path + "' failed");
}

} // namespace trilin
