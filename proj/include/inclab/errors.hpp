#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace inclab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the caller's input was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Seeded random draws kept producing degenerate configurations.
class DegenerateRandomness : public Error {
 public:
  using Error::Error;
};

/// A linear system that must be nonsingular was singular.
class Degenerate : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed its configured work budget.
class ResourceLimit : public Error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t limit)
      : Error(what + " (limit " + std::to_string(limit) + " elementary operations)"),
        limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

/// A construction could not reach the requested size.
class SizeShortfall : public Error {
 public:
  SizeShortfall(const std::string& what, std::uint64_t achieved)
      : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}
  std::uint64_t achieved() const { return achieved_; }

 private:
  std::uint64_t achieved_;
};

/// A sweep could not produce a usable fit.
class SweepFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace inclab
