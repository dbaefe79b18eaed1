#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace empeval {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

// Errors raised while reading corpora, reports, lexicons or config files.
// `line()` is the 1-based line (JSONL) or row (CSV) number, 0 when unknown.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class SchemaError : public InputError {
public:
    SchemaError(const std::string& what, std::size_t line, std::string field)
        : InputError(what, line), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DuplicateError : public InputError {
public:
    using InputError::InputError;
};

class RangeError : public InputError {
public:
    using InputError::InputError;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Backend failures.
class BackendError : public Error {
public:
    using Error::Error;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

// HTTP status >= 400. A 5xx that survives every retry surfaces as this type,
// which is also a TransportError.
class ServerError : public TransportError {
public:
    ServerError(const std::string& what, int status) : TransportError(what), status_(status) {}

    int status() const noexcept { return status_; }

private:
    int status_;
};

class ProtocolError : public BackendError {
public:
    ProtocolError(const std::string& what, std::string payload)
        : BackendError(what), payload_(std::move(payload)) {}

    const std::string& payload() const noexcept { return payload_; }

private:
    std::string payload_;
};

// A backend failure attributed to one pair of a batch.
class PairAssessmentError : public Error {
public:
    PairAssessmentError(std::string pair_id, const std::string& cause, std::exception_ptr nested)
        : Error("pair '" + pair_id + "': " + cause), pair_id_(std::move(pair_id)), nested_(std::move(nested)) {}

    const std::string& pair_id() const noexcept { return pair_id_; }
    std::exception_ptr cause() const noexcept { return nested_; }

private:
    std::string pair_id_;
    std::exception_ptr nested_;
};

// Evaluation errors.
class ShapeError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& what, std::size_t excluded = 0)
        : Error(what), excluded_(excluded) {}

    std::size_t excluded() const noexcept { return excluded_; }

private:
    std::size_t excluded_;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace empeval
