#pragma once

#include <stdexcept>
#include <string>

namespace dctrack {

/// Bad configuration value or malformed config file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dataset file violates the CSV schema contract.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hit/reco files do not line up by event id.
struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precondition violation on a library call (invalid index, zero pT, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dctrack
