#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilspace {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, violated precondition, schema error.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A corner handed to completion_count does not satisfy the gluing hypothesis.
class InvalidCorner : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The mathematics said no: the object is not what the caller claimed.
/// `witness` holds a human-readable counterexample.
class StructuralFailure : public Error {
 public:
  StructuralFailure(const std::string& what, std::string witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// The machine gave up: an enumeration budget was exhausted.
class ResourceLimit : public Error {
 public:
  ResourceLimit(const std::string& what, int dimension_reached = -1)
      : Error(what), dimension_(dimension_reached) {}
  int dimension_reached() const noexcept { return dimension_; }

 private:
  int dimension_;
};

/// A hypothesis of a construction fails (e.g. k < i+1 for translation bundles).
class UnsupportedCase : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace nilspace
