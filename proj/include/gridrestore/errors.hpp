#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace gridrestore {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable category, e.g. "parse" or "unreachable".
    virtual const char* kind() const noexcept { return "error"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what) {}
    const char* kind() const noexcept override { return "parse"; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

/// Served quantity exceeds residual demand.
class OverServiceError : public ValidationError {
public:
    using ValidationError::ValidationError;
    const char* kind() const noexcept override { return "over-service"; }
};

class SolverError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "solver"; }
};

/// Two terminals of a reduced graph are not connected on the road network.
class UnreachableError : public SolverError {
public:
    UnreachableError(std::int64_t from_road, std::int64_t to_road)
        : SolverError("road node " + std::to_string(to_road) + " is unreachable from road node " +
                      std::to_string(from_road)),
          pair_(from_road, to_road) {}
    const char* kind() const noexcept override { return "unreachable"; }
    std::pair<std::int64_t, std::int64_t> pair() const noexcept { return pair_; }

private:
    std::pair<std::int64_t, std::int64_t> pair_;
};

class InfeasibleError : public SolverError {
public:
    using SolverError::SolverError;
    const char* kind() const noexcept override { return "infeasible"; }
};

/// Instance exceeds the exact-solve cap.
class SizeError : public SolverError {
public:
    using SolverError::SolverError;
    const char* kind() const noexcept override { return "size"; }
};

/// The two-stage loop cannot make progress on the remaining demand.
class StallError : public SolverError {
public:
    using SolverError::SolverError;
    const char* kind() const noexcept override { return "stall"; }
};

}  // namespace gridrestore
