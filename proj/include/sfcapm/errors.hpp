#pragma once

#include <stdexcept>
#include <string>

namespace sfcapm {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// An argument is outside the mathematical domain of the operation
// (non-positive wealth, negative variance, value outside a curve's range).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// The inputs make the quantity undefined rather than merely invalid:
// zero base utility, a vanishing expansion denominator, Ez = 0.
class degenerate_error : public error {
public:
    explicit degenerate_error(const std::string& what) : error(what) {}
};

// A certainty equivalent (or similar implicit solution) does not exist
// for the requested target.
class no_solution_error : public error {
public:
    explicit no_solution_error(const std::string& what) : error(what) {}
};

// The equilibrium price diverges: beta * zeta * E(x^{1-rho}) >= 1.
class no_equilibrium_error : public error {
public:
    explicit no_equilibrium_error(const std::string& what) : error(what) {}
};

} // namespace sfcapm
