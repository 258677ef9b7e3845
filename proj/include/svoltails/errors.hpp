#pragma once

#include <stdexcept>
#include <string>

namespace svt {

// Parameter or argument outside the documented domain.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Quadrature or inversion did not reach the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Option price outside the no-arbitrage band.
class ArbitrageError : public std::domain_error {
public:
    explicit ArbitrageError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace svt
