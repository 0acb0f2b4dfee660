#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracstef {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable class name used in CLI reports.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "error"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config_error"; }
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation_error"; }
};

class SingularResolventError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "singular_resolvent"; }
};

class StepError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "step_error"; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, std::vector<double> history = {})
        : Error(msg), history_(std::move(history)) {}
    const char* kind() const noexcept override { return "convergence_error"; }
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

}  // namespace fracstef
