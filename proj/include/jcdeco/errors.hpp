// errors.hpp: exception types shared by the library and the command-line runner

#pragma once

#include <stdexcept>
#include <string>

namespace jcdeco {

// Rejected input: a precondition of an operation does not hold.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The physics does not allow the requested quantity (e.g. no population crossing on a grid).
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The fixed-step integrator could not reach the requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved_residual() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace jcdeco
