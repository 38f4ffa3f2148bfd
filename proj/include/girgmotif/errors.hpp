#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace girgmotif {

/// Bad user input: malformed text, out-of-range parameters, contract violations.
/// The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pattern text that does not follow `k=<int>; edges=<i>-<j>,...`.
class PatternParseError : public ConfigError {
public:
    PatternParseError(const std::string& what, std::size_t position)
        : ConfigError(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// LP/MILP numerical trouble (iteration cap, stalls). Exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A search or node budget ran out before the answer was certain. Exit code 4.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace girgmotif
