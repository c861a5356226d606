#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace reviewbomb {

/// Serializes with invalid UTF-8 replaced rather than thrown on. Pretty
/// output uses 2-space indentation and ends with a newline.
std::string dump_json(const nlohmann::json& j, bool pretty = true);

/// Throws UserError on a missing file or a parse failure.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace reviewbomb
