#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cst {

/// Dense firm index, contiguous 0..n-1 within one loaded network.
using FirmId = std::uint32_t;
/// Dense bank index, contiguous 0..m-1.
using BankId = std::uint32_t;

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, tables, configs).
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid run or generator configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

} // namespace cst
