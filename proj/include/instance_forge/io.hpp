#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "instance_forge/instance.hpp"

namespace instance_forge {

/// Native format: {"n": int, "cities": [[x,y], ...], "id": string?}.
/// Doubles are written in shortest round-trip form, so reads are bit-exact.
nlohmann::json instance_to_json(const TspInstance& inst);
TspInstance instance_from_json(const nlohmann::json& doc);

std::string format_instance(const TspInstance& inst);
TspInstance parse_instance(std::string_view text);

/// TSPLIB EUC_2D subset (NAME, DIMENSION, NODE_COORD_SECTION, EOF).
/// Coordinates are rescaled affinely into [0,1]^2 with a common factor, so the
/// aspect ratio is preserved.
TspInstance parse_tsplib(std::istream& in);

/// Reads native JSON, or TSPLIB when the extension is `.tsp` or the content
/// does not start with '{'.
TspInstance read_instance(const std::filesystem::path& path);
void write_instance(const TspInstance& inst, const std::filesystem::path& path);

/// Writes via a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace instance_forge
