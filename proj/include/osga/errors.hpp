#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osga {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : Error(what + ": expected length " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class SingularFactor : public Error {
 public:
  using Error::Error;
};

class ZeroNormAtom : public Error {
 public:
  explicit ZeroNormAtom(std::size_t index)
      : Error("atom " + std::to_string(index) + " has zero empirical norm on the sample"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class TooFewAtoms : public Error {
 public:
  using Error::Error;
};

class EmptyCandidateSet : public Error {
 public:
  using Error::Error;
};

class CoherenceGateViolation : public Error {
 public:
  using Error::Error;
};

class IterationOutOfRange : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace osga
