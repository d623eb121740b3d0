#ifndef EDM_ERRORS_HPP
#define EDM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace edm {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (carries a 1-based row number where applicable).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    explicit ParseError(const std::string& what) : Error(what), row_(0) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Input contains no data rows.
class EmptyInput : public Error {
public:
    using Error::Error;
};

/// Attribute metadata is invalid or two schemas do not line up.
class SchemaError : public Error {
public:
    using Error::Error;
};

class MissingClassError : public Error {
public:
    using Error::Error;
};

class MissingValueError : public Error {
public:
    using Error::Error;
};

/// Operation applied to an attribute of the wrong kind.
class TypeError : public Error {
public:
    using Error::Error;
};

class FoldError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class EmptyTrainingSet : public Error {
public:
    using Error::Error;
};

/// Model document cannot be decoded (bad version, truncated, inconsistent).
class ModelFormatError : public Error {
public:
    using Error::Error;
};

/// A statistic is undefined for the given input (0/0 and friends).
class DegenerateError : public Error {
public:
    using Error::Error;
};

class DegenerateColumn : public DegenerateError {
public:
    using DegenerateError::DegenerateError;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class SampleSizeError : public Error {
public:
    using Error::Error;
};

class NoRuleError : public Error {
public:
    using Error::Error;
};

} // namespace edm

#endif // EDM_ERRORS_HPP
