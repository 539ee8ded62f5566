#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace eqgeo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point (or finite-difference stencil) outside a declared domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient Jacobian or non-SPD metric at a specific point.
class ImmersionError : public Error {
public:
    ImmersionError(const std::string& what, Eigen::VectorXd point)
        : Error(what), point_(std::move(point)) {}
    const Eigen::VectorXd& point() const { return point_; }

private:
    Eigen::VectorXd point_;
};

/// Vanishing denominator in a closed-form expression.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed; carries the best residual reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed input (economy primitives, manifold files, expressions).
class InvalidInput : public Error {
public:
    using Error::Error;
};

std::string format_point(const Eigen::VectorXd& x);

}  // namespace eqgeo
