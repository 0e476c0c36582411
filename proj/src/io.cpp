#include "bkm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bkm {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string artifact_name(const std::string& command, const std::string& domain_hash, int n,
                          const std::string& ext) {
  return command + "-" + domain_hash + "-" + std::to_string(n) + "." + ext;
}

std::string GramCache::key_path(uint64_t domain_hash, int degree, int precision_bits,
                                uint64_t rule_digest) const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "gram-%016llx-N%d-p%d-r%016llx.bin",
                static_cast<unsigned long long>(domain_hash), degree, precision_bits,
                static_cast<unsigned long long>(rule_digest));
  return (fs::path(dir_) / buf).string();
}

std::optional<GramAny> GramCache::lookup(uint64_t domain_hash, int degree, int precision_bits,
                                         uint64_t rule_digest) const {
  const std::string path = key_path(domain_hash, degree, precision_bits, rule_digest);
  if (!fs::exists(path)) return std::nullopt;
  try {
    GramAny g = load_gram_binary(path);
    const bool ok = std::visit(
        [&](const auto& m) {
          return m.degree == degree && m.domain_hash == domain_hash &&
                 m.rule_digest == rule_digest && int(m.precision_bits) == precision_bits;
        },
        g);
    if (!ok) {
      std::fprintf(stderr, "warning: cache entry %s does not match its key; recomputing\n",
                   path.c_str());
      return std::nullopt;
    }
    return g;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "warning: %s; recomputing\n", e.what());
    return std::nullopt;
  }
}

template <class R>
void GramCache::store(const GramMatrix<R>& g) const {
  fs::create_directories(dir_);
  const std::string path =
      key_path(g.domain_hash, g.degree, PrecisionTraits<R>::bits, g.rule_digest);
  const std::string tmp = path + ".tmp";
  save_gram_binary(tmp, g);
  fs::rename(tmp, path);
}

template void GramCache::store<double>(const GramMatrix<double>&) const;
template void GramCache::store<Float106>(const GramMatrix<Float106>&) const;
template void GramCache::store<Float212>(const GramMatrix<Float212>&) const;

}  // namespace bkm
