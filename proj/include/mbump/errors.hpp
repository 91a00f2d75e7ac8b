#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mbump {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hypothesis on the potential or on (m, theta, a) is violated.
class AssumptionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

/// Shooting could not bracket or resolve the ground-state amplitude.
class ShootingError : public Error {
public:
    ShootingError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Krylov solve stopped before reaching its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Fixed-point iteration failed to contract.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::vector<double> steps)
        : Error(what), steps_(std::move(steps)) {}
    const std::vector<double>& steps() const { return steps_; }

private:
    std::vector<double> steps_;
};

}  // namespace mbump
