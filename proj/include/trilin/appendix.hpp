#pragma once

#include <trilin/gadgets.hpp>
#include <trilin/tlg.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trilin {

/// The explicit clause gadget and its three printed preimages ship as JSON
/// files compiled into the library. Each file's crc32 is fixed at build
/// time from data/appendix/MANIFEST and checked on every load.

std::uint32_t appendix_checksum(std::string_view contents);

/// Raw contents of "table1".."table4". With `dir`, the file is read from
/// that directory instead of the embedded copy; either way the checksum
/// must match or IntegrityError is thrown.
std::string appendix_table_text(const std::string& name,
                                const std::optional<std::string>& dir = std::nullopt);

/// Table 1 as a clause blueprint whose three 12-suns are registered as
/// "S1".."S3" with local ids taken from the S<l>/<i> labels.
GadgetBlueprint load_appendix_clause_gadget(const std::optional<std::string>& dir = std::nullopt);

/// Witness of the preimage with the given number of wheels (0, 1 or 2),
/// mapped onto the Table 1 graph through its labels.
PreimageWitness load_appendix_preimage(int wheels,
                                       const std::optional<std::string>& dir = std::nullopt);

} // namespace trilin
