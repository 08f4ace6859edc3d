#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sdasel/types.hpp"

namespace sdasel {

/// Malformed input: bad dimensions, out-of-range parameters, unparsable files.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky broke down; `pivot()` is the zero-based index of the failing pivot.
class SingularMatrix : public NumericError {
 public:
  SingularMatrix(Index pivot, double value, const std::string& what)
      : NumericError(what), pivot_(pivot), value_(value) {}

  Index pivot() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

 private:
  Index pivot_;
  double value_;
};

/// A subset enumeration would exceed the configured cap.
class EnumerationCapExceeded : public InvalidArgument {
 public:
  EnumerationCapExceeded(double count, std::uint64_t cap, const std::string& what)
      : InvalidArgument(what), count_(count), cap_(cap) {}

  double count() const noexcept { return count_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  double count_;
  std::uint64_t cap_;
};

}  // namespace sdasel
