#pragma once

#include <optional>
#include <string>

namespace nb {

std::string sha256_hex(const std::string& data);

// Content-addressed result store.  Keys are hashed; values are stored as
// flat files under the cache directory (NB_CACHE_DIR or .nb-cache).
class FileCache {
 public:
  explicit FileCache(std::string dir = "");
  const std::string& dir() const { return dir_; }

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& value) const;

 private:
  std::string dir_;
};

}  // namespace nb
