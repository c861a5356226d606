#include "reviewbomb/jsonio.hpp"

#include <fstream>

#include "reviewbomb/errors.hpp"

namespace reviewbomb {

std::string dump_json(const nlohmann::json& j, bool pretty) {
  if (pretty) return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace reviewbomb
