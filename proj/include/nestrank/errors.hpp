#pragma once

#include <stdexcept>
#include <string>

namespace nestrank {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed argument or input data (bad dimensions, out-of-range index,
// unparsable file, empty matrix, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Matrix is not perfectly nested where an operation requires it.
class NotNested : public Error {
 public:
  explicit NotNested(const std::string& what) : Error(what) {}
};

// The diagonal crossing condition fails, so the single-block closed form
// does not apply (the blocked decomposition does).
class CrossingDetected : public Error {
 public:
  explicit CrossingDetected(const std::string& what) : Error(what) {}
};

// Filesystem-level failure (cannot open / read / write a file).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace nestrank
