#pragma once

#include <stdexcept>
#include <string>

namespace ri1d {

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The global minimiser escaped the search interval.
class UnboundedBelowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoLandingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StiffSlideError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model/driver/trajectory input. line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace ri1d
