#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infolab {

enum class ErrorKind {
    NonConvergence,
    NonFinite,
    DomainViolation,
    Unsupported,
    InvalidParameter,
    UndefinedMoment,
    DegenerateDensity,
    PreconditionViolated,
    AssumptionViolated,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can tell a skipped verifier from a broken one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace infolab
