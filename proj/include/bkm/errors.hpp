#pragma once

#include <stdexcept>
#include <string>

namespace bkm {

// Bad inputs: malformed configs, broken invariants, points out of range.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The computation itself failed: non-PD Gram, Newton divergence, rank
// deficiency. Usually a signal to raise precision or refine quadrature.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bkm
