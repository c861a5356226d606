#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace reviewbomb {

/// Incremental 64-bit FNV-1a. Used for content hashes in manifests and for
/// the vocabulary fingerprint that ties model artifacts to a TF-IDF model.
class Fnv1a64 {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }
  std::string hex() const;

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string hash_hex(std::string_view bytes);

/// Streams the file through FNV-1a. Throws UserError if it cannot be read.
std::string hash_file(const std::filesystem::path& path);

}  // namespace reviewbomb
