#pragma once

#include <stdexcept>
#include <string>

namespace rvf {

struct SingularMetric : std::runtime_error {
    explicit SingularMetric(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientJet : std::runtime_error {
    explicit InsufficientJet(const std::string& what) : std::runtime_error(what) {}
};

struct NormalizationError : std::runtime_error {
    explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NotTimelike : std::runtime_error {
    explicit NotTimelike(const std::string& what) : std::runtime_error(what) {}
};

struct ConditionViolation : std::runtime_error {
    explicit ConditionViolation(const std::string& what) : std::runtime_error(what) {}
};

// the shear viscosity must be strictly positive; several solves degenerate otherwise
struct AssumptionViolation : std::runtime_error {
    explicit AssumptionViolation(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateState : std::runtime_error {
    explicit DegenerateState(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientOrders : std::runtime_error {
    explicit InsufficientOrders(const std::string& what) : std::runtime_error(what) {}
};

// failure of one step of the slice-data ladder; carries the step name and,
// when a linear solve degenerated, its condition number
struct StepFailure : std::runtime_error {
    StepFailure(const std::string& step, const std::string& what, double cond = -1.0)
        : std::runtime_error(step + ": " + what), step_name(step), condition_number(cond) {}
    std::string step_name;
    double condition_number;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_number(line) {}
    int line_number;
};

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what, long step = -1)
        : std::runtime_error(what), step_index(step) {}
    long step_index;
};

} // namespace rvf
