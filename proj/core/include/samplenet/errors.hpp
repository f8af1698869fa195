#pragma once
#include <stdexcept>
#include <string>

namespace samplenet {

// Error taxonomy shared by the library and the CLI exit-code mapping.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Misconfigured types or option values (bad dims, eta < 0, K > M, ...).
struct ConfigError : Error {
  using Error::Error;
};

// Tensor shape or rank mismatch between operands.
struct ShapeError : Error {
  using Error::Error;
};

// Violated call contract (non-scalar loss, M < 2 moments, empty sample, ...).
struct ContractError : Error {
  using Error::Error;
};

// Dataset-level problems: empty data, bad split sizes, CSV parse failures.
struct DataError : Error {
  using Error::Error;
};

// NaN/Inf where a finite value is required; training aborts map to this.
struct NumericError : Error {
  using Error::Error;
};

// Tensor used on a tape it was not recorded on, or loss without a graph.
struct GraphError : Error {
  using Error::Error;
};

// Evaluation-protocol violations (mismatched split counts across methods).
struct ProtocolError : Error {
  using Error::Error;
};

// Filesystem failures (unreadable dataset, unwritable output directory).
struct IoError : Error {
  using Error::Error;
};

}  // namespace samplenet
