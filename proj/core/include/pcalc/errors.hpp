#pragma once

#include <stdexcept>
#include <string>

namespace pcalc {

// Every failure carries a stable kind name so reports and the CLI can
// classify it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PCALC_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

PCALC_DEFINE_ERROR(InvalidArgument)
PCALC_DEFINE_ERROR(NonIntegrablePiece)
PCALC_DEFINE_ERROR(UndefinedAtAtom)
PCALC_DEFINE_ERROR(OscillatoryPiece)
PCALC_DEFINE_ERROR(IndeterminateForm)
PCALC_DEFINE_ERROR(NotBV)
PCALC_DEFINE_ERROR(NotInBVA)
PCALC_DEFINE_ERROR(UnsupportedForm)
PCALC_DEFINE_ERROR(UnknownEntry)
PCALC_DEFINE_ERROR(BadParams)
PCALC_DEFINE_ERROR(QuadratureFailure)
PCALC_DEFINE_ERROR(NotIntegrable)
PCALC_DEFINE_ERROR(NoClosedForm)
PCALC_DEFINE_ERROR(UnboundedField)
PCALC_DEFINE_ERROR(ExceptionalPoint)
PCALC_DEFINE_ERROR(HypothesisFailed)
PCALC_DEFINE_ERROR(ShapeMismatch)
PCALC_DEFINE_ERROR(BudgetExceeded)
PCALC_DEFINE_ERROR(ConfigError)

#undef PCALC_DEFINE_ERROR

}  // namespace pcalc
