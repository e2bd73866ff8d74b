#include "hexspine/error.hpp"

namespace hexspine {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotIncident: return "NotIncident";
    case ErrorKind::TangentDegenerate: return "TangentDegenerate";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::MalformedMap: return "MalformedMap";
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidHomomorphism: return "InvalidHomomorphism";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::OrientationReversing: return "OrientationReversing";
    case ErrorKind::KTooSmall: return "KTooSmall";
    case ErrorKind::NotFilling: return "NotFilling";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    }
    return "Unknown";
}

bool is_numeric_failure(ErrorKind kind) {
    return kind == ErrorKind::ClosureFailure || kind == ErrorKind::DomainError;
}

} // namespace hexspine
