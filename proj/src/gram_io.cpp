#include "bkm/gram.hpp"

#include <cstring>
#include <fstream>

namespace bkm {

int gram_precision_bits(const GramAny& g) {
  return std::visit([](const auto& m) { return int(m.precision_bits); }, g);
}

namespace {

constexpr char kMagic[8] = {'B', 'K', 'M', 'G', 'R', 'A', 'M', '1'};

void put_u32(std::string& s, uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  s.append(b, 4);
}
void put_u64(std::string& s, uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  s.append(b, 8);
}
void put_f64(std::string& s, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  s.append(b, 8);
}

struct Reader {
  const char* p;
  const char* end;
  void need(size_t n) const {
    if (p + n > end) throw ValidationError("gram file truncated");
  }
  uint32_t u32() {
    need(4);
    uint32_t v;
    std::memcpy(&v, p, 4);
    p += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v;
    std::memcpy(&v, p, 8);
    p += 8;
    return v;
  }
  double f64() {
    need(8);
    double v;
    std::memcpy(&v, p, 8);
    p += 8;
    return v;
  }
};

template <class R>
GramMatrix<R> read_body(Reader& r, int N, uint64_t domain_hash, uint64_t rule_digest) {
  GramMatrix<R> g;
  g.degree = N;
  g.domain_hash = domain_hash;
  g.rule_digest = rule_digest;
  g.entries.assign(size_t(N + 1) * (N + 1), Cplx<R>{});
  constexpr int parts = PrecisionTraits<R>::parts;
  double buf[parts];
  for (int m = 0; m <= N; ++m)
    for (int n = m; n <= N; ++n) {
      Cplx<R> v;
      for (int i = 0; i < parts; ++i) buf[i] = r.f64();
      v.re = recompose<R>(buf);
      for (int i = 0; i < parts; ++i) buf[i] = r.f64();
      v.im = recompose<R>(buf);
      g.at(m, n) = v;
      if (m != n) g.at(n, m) = conj(v);
    }
  return g;
}

}  // namespace

template <class R>
void save_gram_binary(const std::string& path, const GramMatrix<R>& g) {
  std::string s;
  s.append(kMagic, 8);
  put_u32(s, uint32_t(PrecisionTraits<R>::bits));
  put_u32(s, uint32_t(g.degree));
  put_u64(s, g.domain_hash);
  put_u64(s, g.rule_digest);
  constexpr int parts = PrecisionTraits<R>::parts;
  double buf[parts];
  for (int m = 0; m <= g.degree; ++m)
    for (int n = m; n <= g.degree; ++n) {
      decompose(g.at(m, n).re, buf);
      for (int i = 0; i < parts; ++i) put_f64(s, buf[i]);
      decompose(g.at(m, n).im, buf);
      for (int i = 0; i < parts; ++i) put_f64(s, buf[i]);
    }
  put_u64(s, fnv1a(s));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write gram file '" + path + "'");
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template void save_gram_binary<double>(const std::string&, const GramMatrix<double>&);
template void save_gram_binary<Float106>(const std::string&, const GramMatrix<Float106>&);
template void save_gram_binary<Float212>(const std::string&, const GramMatrix<Float212>&);

GramAny load_gram_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open gram file '" + path + "'");
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (s.size() < 8 + 4 + 4 + 8 + 8 + 8 || std::memcmp(s.data(), kMagic, 8) != 0)
    throw ValidationError("not a gram file: '" + path + "'");
  uint64_t stored;
  std::memcpy(&stored, s.data() + s.size() - 8, 8);
  if (fnv1a(std::string_view(s.data(), s.size() - 8)) != stored)
    throw ValidationError("gram file digest mismatch: '" + path + "'");
  Reader r{s.data() + 8, s.data() + s.size() - 8};
  const uint32_t bits = r.u32();
  const int N = static_cast<int>(r.u32());
  const uint64_t dh = r.u64();
  const uint64_t rd = r.u64();
  if (bits == 53) return read_body<double>(r, N, dh, rd);
  if (bits == 106) return read_body<Float106>(r, N, dh, rd);
  if (bits == 212) return read_body<Float212>(r, N, dh, rd);
  throw ValidationError("gram file has unsupported precision");
}

template <class R>
std::string gram_to_csv(const GramMatrix<R>& g) {
  std::string out = "m,n,re,im\n";
  for (int m = 0; m <= g.degree; ++m)
    for (int n = 0; n <= g.degree; ++n)
      out += std::to_string(m) + "," + std::to_string(n) + "," +
             real_to_string(g.at(m, n).re) + "," + real_to_string(g.at(m, n).im) + "\n";
  return out;
}

template std::string gram_to_csv<double>(const GramMatrix<double>&);
template std::string gram_to_csv<Float106>(const GramMatrix<Float106>&);
template std::string gram_to_csv<Float212>(const GramMatrix<Float212>&);

}  // namespace bkm
