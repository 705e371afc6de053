#pragma once

#include <stdexcept>
#include <string>

namespace eqmine {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pairset construction
struct EmptyPairSet : Error { using Error::Error; };
struct DuplicateLeft : Error { using Error::Error; };
struct DuplicateRight : Error { using Error::Error; };
struct ArityOutOfRange : Error { using Error::Error; };

// ingestion
struct IoError : Error { using Error::Error; };
struct RaggedRows : Error { using Error::Error; };
struct NoNumericColumns : Error { using Error::Error; };
struct EmptyAfterFiltering : Error { using Error::Error; };

// statistics
struct EmptySample : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// configuration
struct ConfigError : Error { using Error::Error; };

}  // namespace eqmine
