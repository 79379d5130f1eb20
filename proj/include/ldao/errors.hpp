#pragma once

#include <stdexcept>

namespace ldao {

// Base of all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed files, shape mismatches, invalid configuration.
// The CLI maps these to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

// Numeric failure inside an otherwise valid computation. CLI exit code 2.
struct NumericError : Error {
    using Error::Error;
};

// File write failure. CLI exit code 2.
struct IoError : Error {
    using Error::Error;
};

// --- ingest ---
struct MissingTarget : ValidationError { using ValidationError::ValidationError; };
struct NonNumericCell : ValidationError { using ValidationError::ValidationError; };
struct EmptyFile : ValidationError { using ValidationError::ValidationError; };
struct RaggedRow : ValidationError { using ValidationError::ValidationError; };

// --- cluster / augment ---
struct TooFewPoints : ValidationError { using ValidationError::ValidationError; };

// --- density ---
struct CholeskyFailure : NumericError { using NumericError::NumericError; };
struct DimensionMismatch : ValidationError { using ValidationError::ValidationError; };

// --- metrics ---
struct LengthMismatch : ValidationError { using ValidationError::ValidationError; };
struct EmptyInput : ValidationError { using ValidationError::ValidationError; };
struct ZeroSpread : ValidationError { using ValidationError::ValidationError; };
struct TooFewPairs : ValidationError { using ValidationError::ValidationError; };

// --- harness ---
struct KTooLarge : ValidationError { using ValidationError::ValidationError; };

} // namespace ldao
