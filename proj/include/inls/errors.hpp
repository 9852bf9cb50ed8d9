#pragma once

#include <stdexcept>
#include <string>

namespace inls {

// Requested value sits on a pole of an analytically continued formula.
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside the domain where the operation is defined at all.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// The exponent system admits no solution; carries the violated inequality.
struct InfeasibleSystem : std::runtime_error {
    explicit InfeasibleSystem(const std::string& what) : std::runtime_error(what) {}
};

// A Hoelder-type exponent identity required by an inequality test fails.
struct ExponentMismatch : std::runtime_error {
    explicit ExponentMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Blow-up rate estimation was requested on a trajectory with no divergence.
struct NotBlowingUp : std::runtime_error {
    explicit NotBlowingUp(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace inls
