#pragma once

#include <optional>
#include <string>

#include "bkm/gram.hpp"

namespace bkm {

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

std::string artifact_name(const std::string& command, const std::string& domain_hash, int n,
                          const std::string& ext);

// On-disk Gram cache keyed by (domain-hash, degree, precision, rule digest).
// Digest mismatches and unreadable files count as misses.
class GramCache {
 public:
  explicit GramCache(std::string dir) : dir_(std::move(dir)) {}

  std::string key_path(uint64_t domain_hash, int degree, int precision_bits,
                       uint64_t rule_digest) const;
  std::optional<GramAny> lookup(uint64_t domain_hash, int degree, int precision_bits,
                                uint64_t rule_digest) const;
  template <class R>
  void store(const GramMatrix<R>& g) const;

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

}  // namespace bkm
