#pragma once

#include <stdexcept>
#include <string>

namespace csusy {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class GridError : public Error {
public:
    explicit GridError(const std::string& msg) : Error("grid: " + msg) {}
};

/// Non-finite coefficient or inhomogeneity encountered during integration.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& msg, double x)
        : Error("non-finite value: " + msg + " at x=" + std::to_string(x)), x_(x) {}
    double where() const { return x_; }

private:
    double x_;
};

/// u0 vanishes at an interior point where 1/u0^2 is needed.
class SingularChainError : public Error {
public:
    SingularChainError(const std::string& msg, double x)
        : Error("singular chain: " + msg + " at x=" + std::to_string(x)), x_(x) {}
    double where() const { return x_; }

private:
    double x_;
};

/// Wronskian has an interior zero; the transformed potential would be singular.
class SingularWronskianError : public Error {
public:
    explicit SingularWronskianError(const std::string& msg)
        : Error("singular wronskian: " + msg) {}
};

/// Gamma pole, Kummer non-convergence, and similar special-function failures.
class SpecfunError : public Error {
public:
    explicit SpecfunError(const std::string& msg) : Error("specfun: " + msg) {}
};

/// The zero-energy family denominator c + I(x) crosses zero.
class FamilySingularityError : public Error {
public:
    FamilySingularityError(const std::string& msg, double x, double c_lo, double c_hi)
        : Error("riccati family: " + msg + " at x=" + std::to_string(x)),
          x_(x), c_lo_(c_lo), c_hi_(c_hi) {}
    double where() const { return x_; }
    /// Admissible one-sided ranges: c > c_hi() or c < c_lo().
    double admissible_below() const { return c_lo_; }
    double admissible_above() const { return c_hi_; }

private:
    double x_, c_lo_, c_hi_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

} // namespace csusy
