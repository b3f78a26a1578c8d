#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpd2s {

/// Invalid argument or parameter outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// An iterative estimator stopped without meeting its convergence criterion.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown dataset or other name lookup failure.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed user input (CSV files, resources). Line numbers are 1-based; 0 means unknown.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Malformed configuration document; carries the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace dpd2s
