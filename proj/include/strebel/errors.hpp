#pragma once

#include <stdexcept>
#include <string>

namespace strebel {

/// Base class for all certified-arithmetic and pipeline failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Neither a finite value nor a pole could be certified at the working
/// precision. Callers are expected to retry at higher precision.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// A certification (root clusters, sign decision, ...) failed even after
/// the precision budget for the operation was spent.
class PrecisionExhaustedError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class NotDoublePoleError : public Error {
 public:
  using Error::Error;
};

class NotStrebelLikeError : public Error {
 public:
  using Error::Error;
};

class DivergedError : public Error {
 public:
  using Error::Error;
};

class MaxLengthError : public Error {
 public:
  using Error::Error;
};

class MismatchError : public Error {
 public:
  using Error::Error;
};

class PoleOnPathError : public Error {
 public:
  using Error::Error;
};

class UnmatchedHalfEdgeError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class InconsistentTopologyError : public Error {
 public:
  using Error::Error;
};

}  // namespace strebel
