#include "nb/cache.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nb {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

FileCache::FileCache(std::string dir) : dir_(std::move(dir)) {
  if (dir_.empty()) {
    const char* env = std::getenv("NB_CACHE_DIR");
    dir_ = env ? env : ".nb-cache";
  }
}

std::optional<std::string> FileCache::get(const std::string& key) const {
  std::filesystem::path p = std::filesystem::path(dir_) / sha256_hex(key);
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void FileCache::put(const std::string& key, const std::string& value) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  std::filesystem::path p = std::filesystem::path(dir_) / sha256_hex(key);
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << value;
  }
  std::filesystem::rename(tmp, p, ec);
}

}  // namespace nb
