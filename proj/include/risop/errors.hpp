#ifndef RISOP_ERRORS_HPP
#define RISOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace risop {

// Precondition / contract violations (bad arguments, dimension mismatches).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Inputs outside a function's mathematical domain (poles, negative arguments).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

class PoleError : public DomainError {
public:
    explicit PoleError(const std::string& msg) : DomainError(msg) {}
};

// Requested accuracy could not be reached (non-convergence, cancellation,
// series instability).
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A density grid does not contain the required probability mass.  Carries a
// suggested upper support limit.
class GridError : public std::runtime_error {
public:
    GridError(const std::string& msg, double suggested_max)
        : std::runtime_error(msg), suggested_x_max(suggested_max) {}
    double suggested_x_max;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace risop

#endif
