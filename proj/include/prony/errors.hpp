#ifndef PRONY_ERRORS_HPP
#define PRONY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prony {

/// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument or violated precondition (wrong sizes, invalid order, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// TLS solution does not exist (last component of the singular vector ~ 0)
/// or the input matrix contains non-finite entries.
class TlsError : public Error {
public:
    explicit TlsError(const std::string& what) : Error(what) {}
};

/// Adaptive filter weights became non-finite. step() reports the sample
/// index at which the update blew up (-1 when unknown).
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long step = -1)
        : Error(step >= 0 ? what + " at step " + std::to_string(step) : what),
          step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Reconstruction coincides with the input mean; the precision measure
/// denominator is zero.
class DegenerateReconstruction : public Error {
public:
    explicit DegenerateReconstruction(const std::string& what) : Error(what) {}
};

/// Malformed signal file; carries the 1-based line number when known.
class CsvError : public Error {
public:
    CsvError(const std::string& what, std::size_t line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem failure; message includes the offending path.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace prony

#endif
