#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class NotNatural : public Error {
 public:
  using Error::Error;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class RankNotOne : public Error {
 public:
  using Error::Error;
};

class DivisionByNearZero : public Error {
 public:
  using Error::Error;
};

class NoFixedPoint : public Error {
 public:
  using Error::Error;
};

/// Raised when no verified witness could be produced. Carries the case-tree
/// trace so callers can report where the walk stopped.
class ClassificationFailed : public Error {
 public:
  ClassificationFailed(const std::string& what, std::vector<std::string> trace = {})
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<std::string>& trace() const noexcept { return trace_; }

 private:
  std::vector<std::string> trace_;
};

}  // namespace evo
