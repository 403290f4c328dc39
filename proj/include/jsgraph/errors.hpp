#ifndef JSGRAPH_ERRORS_HPP
#define JSGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace jsg {

// Point or curve left the working chart window.
class ChartError : public std::domain_error {
public:
    explicit ChartError(const std::string& what) : std::domain_error(what) {}
};

// Caller violated an operation precondition (bad arguments, wrong state).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// ODE step-size underflow or quadrature failure.
class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Shooting BVP found no bracketed solution angle.
class NoConnectionError : public std::runtime_error {
public:
    explicit NoConnectionError(const std::string& what) : std::runtime_error(what) {}
};

class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// Newton failed even after continuation; carries the last iterate.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> last_iterate)
        : std::runtime_error(what), last_iterate(std::move(last_iterate)) {}
    std::vector<double> last_iterate;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jsg

#endif
