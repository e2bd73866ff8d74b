#pragma once

#include <stdexcept>
#include <string>

namespace hexspine {

enum class ErrorKind {
    NotIncident,
    TangentDegenerate,
    NoIntersection,
    NotDisjoint,
    Infeasible,
    OutOfRange,
    DomainError,
    BadGrid,
    MalformedMap,
    AxiomViolation,
    Disconnected,
    InvalidHomomorphism,
    ClosureFailure,
    OrientationReversing,
    KTooSmall,
    NotFilling,
    NoWitness,
    OutOfDomain,
};

const char* to_string(ErrorKind kind);

// Precondition failures map to CLI exit code 2, broken numeric invariants to 3.
bool is_numeric_failure(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hexspine
