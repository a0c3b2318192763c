#pragma once

#include <stdexcept>
#include <string>

namespace hdgshape {

/// Invalid mesh, shape or transfer-path construction.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular or otherwise failed linear algebra.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-facing configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdgshape
