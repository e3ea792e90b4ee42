#include <trilin/appendix.hpp>

#include "appendix_data.hpp"

#include <trilin/error.hpp>
#include <trilin/graph_io.hpp>

#include <zlib.h>

#include <cstdio>
#include <filesystem>

namespace trilin {

namespace {

const appendix_data::Entry& entry(const std::string& name)
{
    for (const auto& e : appendix_data::entries)
        if (e.name == name)
            return e;
    throw Error("unknown appendix table '" + name + "'");
}

nlohmann::json parse_table(const std::string& name, const std::optional<std::string>& dir)
{
    auto text = appendix_table_text(name, dir);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw IntegrityError("appendix table '" + name + "' is not valid JSON: " + ex.what());
    }
    if (j.value("format", "") != "trilin-appendix" || j.value("version", 0) != 1 ||
        j.value("name", "") != name)
        throw IntegrityError("appendix table '" + name + "' has an unexpected header");
    return j;
}

} // namespace

std::uint32_t appendix_checksum(std::string_view contents)
{
    auto crc = ::crc32(0L, Z_NULL, 0);
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(contents.data()),
                  static_cast<uInt>(contents.size()));
    return static_cast<std::uint32_t>(crc);
}

std::string appendix_table_text(const std::string& name, const std::optional<std::string>& dir)
{
    const auto& e = entry(name);
    std::string text;
    std::string origin;
    if (dir) {
        origin = (std::filesystem::path(*dir) / (name + ".json")).string();
        text = read_file(origin);
    } else {
        origin = "embedded " + name;
        text = std::string(e.contents);
    }
    auto crc = appendix_checksum(text);
    if (crc != e.crc32) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "crc32 %08x, expected %08x", crc, e.crc32);
        throw IntegrityError("appendix data " + origin + " failed its checksum (" + buf + ")");
    }
    return text;
}

GadgetBlueprint load_appendix_clause_gadget(const std::optional<std::string>& dir)
{
    auto j = parse_table("table1", dir);
    GadgetBlueprint bp;
    bp.kind = "clause";
    try {
        bp.graph = graph_from_json(j.at("graph"));
    } catch (const Error& ex) {
        throw IntegrityError(std::string("appendix table1: ") + ex.what());
    }
    if (!bp.graph.has_labels())
        throw IntegrityError("appendix table1 carries no vertex labels");
    for (int l = 1; l <= 3; ++l) {
        auto prefix = "S" + std::to_string(l);
        SubGadget sun{sun_kind(12), {}};
        for (int i = 0; i < 24; ++i) {
            auto v = bp.graph.find_label(prefix + "/" + std::to_string(i));
            if (!v)
                throw IntegrityError("appendix table1 has no vertex " + prefix + "/" +
                                     std::to_string(i));
            sun.vertices.push_back(*v);
        }
        bp.roles[prefix + "/a-triangle"] = {sun.vertices[0], sun.vertices[2], sun.vertices[1]};
        bp.roles[prefix + "/b-triangle"] = {sun.vertices[12], sun.vertices[14], sun.vertices[13]};
        bp.sub_gadgets[prefix] = std::move(sun);
    }
    return bp;
}

PreimageWitness load_appendix_preimage(int wheels, const std::optional<std::string>& dir)
{
    if (wheels < 0 || wheels > 2)
        throw Error("appendix preimages exist for 0, 1 or 2 wheels, not " +
                    std::to_string(wheels));
    auto name = "table" + std::to_string(wheels + 2);
    auto j = parse_table(name, dir);
    if (j.value("wheels", -1) != wheels || j.value("target", "") != "table1")
        throw IntegrityError("appendix " + name + " header does not match its role");
    nlohmann::json witness = {{"target", graph_to_json(load_appendix_clause_gadget(dir).graph)},
                              {"candidate", j.at("candidate")},
                              {"map", j.at("map")}};
    try {
        return witness_from_json(witness);
    } catch (const Error& ex) {
        throw IntegrityError("appendix " + name + ": " + ex.what());
    }
}

} // namespace trilin
