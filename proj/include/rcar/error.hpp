#pragma once

#include <stdexcept>
#include <string>

namespace rcar {

/// Failure categories. The CLI maps each one to an exit code.
enum class ErrorKind {
    Config,        ///< bad parameters or configuration
    Numeric,       ///< singular solve, non-convergent root iteration
    Domain,        ///< argument outside an operation's domain
    Hypothesis,    ///< rho(M) or rho(H) >= 1
    Pathological,  ///< parameter point inside the excluded set
    Degenerate,    ///< data that cannot support an estimator
    Parse,         ///< malformed input file
    Explosion,     ///< simulated trajectory overflowed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* to_string(ErrorKind kind) noexcept;

}  // namespace rcar
