#pragma once
#include <stdexcept>
#include <string>

namespace fracext {

/// Distinguishes bad input from numerical failure; the CLI maps these to exit codes 2 and 3.
enum class ErrorKind { validation, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg, double estimate = 0)
        : std::runtime_error(msg), kind_(kind), estimate_(estimate) {}
    ErrorKind kind() const { return kind_; }
    /// error estimate attached to quadrature failures, zero otherwise
    double estimate() const { return estimate_; }
private:
    ErrorKind kind_;
    double estimate_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
    throw Error(ErrorKind::validation, msg);
}
[[noreturn]] inline void fail_numerical(const std::string& msg, double estimate = 0) {
    throw Error(ErrorKind::numerical, msg, estimate);
}

}  // namespace fracext
