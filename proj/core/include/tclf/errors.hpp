#ifndef TCLF_ERRORS_HPP
#define TCLF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tclf {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or data handed to an operation: shape mismatch, non-finite
// values, out-of-range coordinates, empty inputs.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Input file does not match the expected schema (missing columns, bad header).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Layer stack or model configuration is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss or gradient.
class TrainingFault : public Error {
public:
    using Error::Error;
};

// Model file is corrupted, truncated, or carries an unknown version.
class SerializationError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tclf

#endif
