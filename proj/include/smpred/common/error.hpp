#pragma once

#include <stdexcept>
#include <string>

namespace smpred {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment / network / generation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Matrix or batch dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation (negative m1/m2,
// joint angle beyond [-pi, pi], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Scene construction or ray queries on invalid geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// File I/O and schema-version problems.
class IoError : public Error {
 public:
  using Error::Error;
};

// Training loss became non-finite or exceeded the divergence limit.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Degenerate data: constant channel, coincident point cloud, ...
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Checkpoint / scene / dataset provenance mismatch.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace smpred
