#ifndef DYNMAP_ERRORS_HPP
#define DYNMAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynmap {

/// Operand dimensions are incompatible or an index range is out of bounds.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Storage violates a format rule (duplicate COO coordinates, wrong layout for a mode).
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric argument lies outside its mathematical domain (densities outside [0,1]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration (memory budget too small, p_sys < 8, density > 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The runtime asked for a density that has not been profiled yet.
class RuntimeOrderError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The analytical model contradicts itself (region enumeration found a violation).
class ModelInconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input file could not be parsed. Message carries `file:line: reason`.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& reason)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
          file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace dynmap

#endif  // DYNMAP_ERRORS_HPP
