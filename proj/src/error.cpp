#include "infolab/error.hpp"

namespace infolab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::UndefinedMoment: return "UndefinedMoment";
        case ErrorKind::DegenerateDensity: return "DegenerateDensity";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    }
    return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace infolab
