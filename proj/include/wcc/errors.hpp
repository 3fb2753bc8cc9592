#pragma once

#include <stdexcept>

namespace wcc {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or truncated input data (file headers, payloads, blobs).
struct ParseError : Error {
    using Error::Error;
};

// Shape, divisibility or index constraint violation.
struct DimError : Error {
    using Error::Error;
};

// Filesystem-level failure (open, read, write).
struct IoError : Error {
    using Error::Error;
};

}  // namespace wcc
