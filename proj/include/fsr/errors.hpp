#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape or size disagreement between operands.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid configuration (group count not dividing channels, bad positions, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed container file; carries the byte offset where parsing failed.
struct FormatError : Error {
  std::size_t byte_offset;
  FormatError(const std::string& msg, std::size_t offset)
      : Error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
};

struct IoError : Error {
  using Error::Error;
};

/// API contract violation (e.g. backward from a non-scalar node).
struct ContractError : Error {
  using Error::Error;
};

/// Requested an operation this build does not provide.
struct CapabilityError : Error {
  using Error::Error;
};

}  // namespace fsr
