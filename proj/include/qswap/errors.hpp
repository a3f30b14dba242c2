#pragma once

#include <stdexcept>
#include <string>

namespace qswap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operand sizes disagree (state vs chain, profile vs chain, ...).
struct DimensionError : Error {
    using Error::Error;
};

// A requested design or argument has no physical solution.
struct InfeasibleDesign : Error {
    using Error::Error;
};

// A documented precondition of an operation was violated.
struct PreconditionError : Error {
    using Error::Error;
};

// A schedule is malformed or inconsistent with the chain it is run on.
struct ScheduleError : Error {
    using Error::Error;
};

// Configuration file problem; `where` is a JSON pointer to the offending field.
struct ConfigError : Error {
    ConfigError(std::string where_, const std::string& what)
        : Error(where_ + ": " + what), where(std::move(where_)) {}
    std::string where;
};

}  // namespace qswap
