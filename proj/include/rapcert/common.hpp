#pragma once

#include <stdexcept>
#include <string>

namespace rapcert {

// Default tolerances. Each can be overridden per call where operations take an
// options struct; these are the values documented in the CLI --help text.
namespace tol {
inline constexpr double exact = 1e-12;       // identities exact in real arithmetic
inline constexpr double spec_gap = 1e-9;     // dominant-eigenvalue real-part gap
inline constexpr double angle = 1e-9;        // root-of-unity phase tolerance (scaled by 1/order)
inline constexpr double cancel = 1e-12;      // generating-function pole survival
inline constexpr double growth = 1e-3;       // log-growth slope for sequence boundedness
inline constexpr double peripheral = 1e-8;   // relative modulus window for peripheral spectrum
inline constexpr double quad = 1e-10;        // adaptive quadrature absolute tolerance
}  // namespace tol

// Ill-formed inputs: wrong dimensions, sign violations, malformed models.
struct StructuralError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inputs outside an operation's mathematical domain (phi, epsilon ranges, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A numeric kernel failed to reach its accuracy contract.
struct NumericError : std::runtime_error {
    double achieved;
    explicit NumericError(const std::string& what, double achieved_tol = 0.0)
        : std::runtime_error(what), achieved(achieved_tol) {}
};

// A quantity the theory guarantees was violated at runtime; if one of these
// ever fires on valid inputs, either the implementation or the construction
// itself is wrong.
struct InternalInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rapcert
