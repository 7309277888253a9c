#pragma once

#include <stdexcept>
#include <string>

namespace hud {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (usage error, exit code 2).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Pattern/config file could not be parsed; carries the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_number(line) {}
    explicit ParseError(const std::string& message) : Error(message), line_number(0) {}

    int line_number;
};

/// Stealthy optimization did not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double best)
        : Error(message), best_objective(best) {}

    double best_objective;
};

/// Generated pattern violates the minimum-separation constraint.
class SeparationError : public Error {
public:
    SeparationError(const std::string& message, double dist, int i, int j)
        : Error(message), closest_distance(dist), first(i), second(j) {}

    double closest_distance;
    int first;
    int second;
};

}  // namespace hud
