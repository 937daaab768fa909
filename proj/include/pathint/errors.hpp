#pragma once

#include <stdexcept>
#include <string>

namespace pathint {

enum class ErrorKind {
    domain,
    no_root,
    non_convergence,
    multiple_solutions,
    focal_point,
    grid_mismatch,
    instability,
    config,
};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// No state value maps onto the requested short rate.
class NoRootError : public Error {
public:
    NoRootError(const std::string& what, double attainable_min)
        : Error(ErrorKind::no_root, what), attainable_min_(attainable_min) {}
    double attainable_min() const noexcept { return attainable_min_; }

private:
    double attainable_min_;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double last_residual)
        : Error(ErrorKind::non_convergence, what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// The Jacobi field crossed zero: the Gaussian prefactor is undefined.
class FocalPointError : public Error {
public:
    FocalPointError(const std::string& what, double location)
        : Error(ErrorKind::focal_point, what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

class GridMismatchError : public Error {
public:
    explicit GridMismatchError(const std::string& what) : Error(ErrorKind::grid_mismatch, what) {}
};

class InstabilityError : public Error {
public:
    explicit InstabilityError(const std::string& what) : Error(ErrorKind::instability, what) {}
};

/// Bad configuration or model file. `line` is 0 when no source position is known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0) : Error(ErrorKind::config, what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace pathint
