#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bkm {

// Working precisions. 53 bits is plain IEEE double; 106 and 212 bits are
// binary floats with exactly 2x and 4x the double mantissa, used where the
// monomial Gram matrix is too ill-conditioned for double.
using Float106 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<106, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using Float212 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<212, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class R>
struct PrecisionTraits;

template <>
struct PrecisionTraits<double> {
  static constexpr int bits = 53;
  // number of doubles needed for an exact decomposition
  static constexpr int parts = 1;
  static constexpr const char* name = "double";
};
template <>
struct PrecisionTraits<Float106> {
  static constexpr int bits = 106;
  static constexpr int parts = 3;
  static constexpr const char* name = "float106";
};
template <>
struct PrecisionTraits<Float212> {
  static constexpr int bits = 212;
  static constexpr int parts = 5;
  static constexpr const char* name = "float212";
};

inline void check_precision_bits(int bits) {
  if (bits != 53 && bits != 106 && bits != 212)
    throw std::invalid_argument("precision-bits must be one of 53, 106, 212 (got " +
                                std::to_string(bits) + ")");
}

// Exact decomposition of an extended float into a short sum of doubles.
// Each component is the nearest double to the remainder, so the residual
// always fits the remaining mantissa and the sum reconstructs bit-exactly.
template <class R>
inline void decompose(const R& x, double* out) {
  R rem = x;
  for (int i = 0; i < PrecisionTraits<R>::parts; ++i) {
    out[i] = static_cast<double>(rem);
    rem -= R(out[i]);
  }
}
template <>
inline void decompose<double>(const double& x, double* out) {
  out[0] = x;
}

template <class R>
inline R recompose(const double* parts) {
  R x = 0;
  for (int i = PrecisionTraits<R>::parts - 1; i >= 0; --i) x += R(parts[i]);
  return x;
}
template <>
inline double recompose<double>(const double* parts) {
  return parts[0];
}

// Full-precision decimal string (round-trips for the CSV forms).
template <class R>
inline std::string real_to_string(const R& x) {
  return x.str(0, std::ios_base::scientific);
}
template <>
inline std::string real_to_string<double>(const double& x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

template <class R>
inline R real_from_string(const std::string& s) {
  return R(s);
}
template <>
inline double real_from_string<double>(const std::string& s) {
  return std::stod(s);
}

}  // namespace bkm
