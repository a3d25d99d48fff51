#pragma once

#include <stdexcept>
#include <string>

namespace rollscan {

/// Invalid or inconsistent run configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data that parses but violates the pipeline's contracts. CLI exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A file whose format is recognized but not supported (e.g. 16-bit PNG).
struct UnsupportedFormatError : DataError {
    using DataError::DataError;
};

/// A file that claims a supported format but cannot be decoded.
struct CorruptFileError : DataError {
    using DataError::DataError;
};

/// Filesystem-level failure (missing file, unwritable path). CLI exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rollscan
