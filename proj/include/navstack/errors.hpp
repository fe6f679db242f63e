#ifndef NAVSTACK_ERRORS_HPP
#define NAVSTACK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace navstack {

// Command or parameter outside the configured vehicle limits.
struct LimitViolation : std::invalid_argument {
    explicit LimitViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

// Non-finite or otherwise unusable state.
struct InvalidState : std::runtime_error {
    explicit InvalidState(const std::string& msg) : std::runtime_error(msg) {}
};

// Scenario / config file problems. `where` carries file:line or a field path.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Global planner could not produce a path.
struct PlanningError : std::runtime_error {
    explicit PlanningError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnreachableGoal : PlanningError {
    explicit UnreachableGoal(const std::string& msg) : PlanningError(msg) {}
};

struct InvalidEndpoint : PlanningError {
    explicit InvalidEndpoint(const std::string& msg) : PlanningError(msg) {}
};

// Band optimization produced a non-finite objective.
struct OptimizationDiverged : std::runtime_error {
    explicit OptimizationDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace navstack

#endif
