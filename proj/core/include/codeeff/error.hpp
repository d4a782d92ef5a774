#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codeeff {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input (JSON syntax, bad numeric argument, ...).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A record that parsed but violates the dataset schema or a type invariant.
class SchemaError : public Error {
public:
    SchemaError(std::string record_id, std::string field, const std::string& detail);

    const std::string& record_id() const noexcept { return record_id_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string record_id_;
    std::string field_;
};

// The execution backend itself failed, as opposed to the program under test.
class InfraError : public Error {
public:
    using Error::Error;
};

}  // namespace codeeff
