#pragma once

#include <stdexcept>
#include <string>

namespace heatcontent {

/// Invalid input: bad domain parameters, bad configuration, dimension
/// mismatch, requests outside a validity region. The CLI maps these to
/// exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical engine could not produce a result for a valid request
/// (cost guard, resolution too coarse, grid too large). Exit code 3.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested derivative order exceeds what a noisy engine can support.
class NoisyEngineError : public InvalidArgument {
 public:
  NoisyEngineError() : InvalidArgument("engine too noisy for requested order") {}
};

}  // namespace heatcontent
