#pragma once

#include <stdexcept>
#include <string>

namespace cluspath {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV rows, JSON documents, fingerprints).
class DataError : public Error {
public:
    using Error::Error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// The optimizer reached a state it cannot continue from (non-finite objective).
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::string state_dump)
        : Error(what), state_dump_(std::move(state_dump)) {}

    const std::string& state_dump() const noexcept { return state_dump_; }

private:
    std::string state_dump_;
};

}  // namespace cluspath
