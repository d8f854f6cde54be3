#ifndef TSPGAPLAB_ERRORS_HPP
#define TSPGAPLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tspgap {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed instance/tour/triangulation text. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// An enumeration or sampling guard was exceeded without --force.
class GuardError : public Error {
public:
    explicit GuardError(const std::string& what) : Error(what) {}
};

/// File system failure (unreadable input, unwritable output).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace tspgap

#endif
