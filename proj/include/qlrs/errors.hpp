#pragma once

#include <stdexcept>
#include <string>

namespace qlrs {

// Numerical failures raised by the propagator and state machinery.
class NormDriftError : public std::runtime_error {
 public:
  explicit NormDriftError(const std::string& what) : std::runtime_error(what) {}
};

class TruncationOverflowError : public std::runtime_error {
 public:
  explicit TruncationOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Cat generation stopped making progress before reaching its target.
class StalledGenerationError : public std::runtime_error {
 public:
  StalledGenerationError(const std::string& what, double achieved_alpha)
      : std::runtime_error(what), achieved_alpha(achieved_alpha) {}
  double achieved_alpha;
};

// Requested displacement exceeds the reachable range for the given coupling.
class InfeasibleAlphaError : public std::runtime_error {
 public:
  explicit InfeasibleAlphaError(const std::string& what) : std::runtime_error(what) {}
};

class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qlrs
