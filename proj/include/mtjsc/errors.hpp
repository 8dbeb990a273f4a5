#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtjsc {

// Base for every error raised by the simulator. Subsystems throw the
// specific subclasses below; the CLI catches this type and maps it to a
// non-zero exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TargetUnreachable : public Error {
public:
    TargetUnreachable(double target, double lo, double hi);
    double target() const { return target_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double target_, lo_, hi_;
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t a, std::size_t b);
};

class CyclicNetlist : public Error {
public:
    explicit CyclicNetlist(const std::string& node);
};

class CapacityExceeded : public Error {
public:
    CapacityExceeded(std::size_t level, std::size_t demand, std::size_t capacity);
    std::size_t level() const { return level_; }

private:
    std::size_t level_;
};

class UnknownLevel : public Error {
public:
    UnknownLevel(std::size_t column, double probability);
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mtjsc
