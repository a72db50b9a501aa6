#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sicta {

/// Base of every error raised by the library. `kind()` is a stable
/// identifier used in structured CLI error output.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual std::string_view kind() const noexcept = 0;
};

#define SICTA_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                            \
    public:                                                                \
        using Error::Error;                                                \
        std::string_view kind() const noexcept override { return #Name; } \
    }

SICTA_DEFINE_ERROR(InvalidArgument);
SICTA_DEFINE_ERROR(RejectedDistribution);
SICTA_DEFINE_ERROR(InvalidOccupancy);
SICTA_DEFINE_ERROR(TruncationTooTight);
SICTA_DEFINE_ERROR(PrecisionExhausted);
SICTA_DEFINE_ERROR(DegenerateDistribution);
SICTA_DEFINE_ERROR(TailBoundTooLarge);
SICTA_DEFINE_ERROR(PoleOfGamma);
SICTA_DEFINE_ERROR(UnstableSystem);
SICTA_DEFINE_ERROR(InfeasibleConstraint);
SICTA_DEFINE_ERROR(TermBlowup);
SICTA_DEFINE_ERROR(NotStationary);
SICTA_DEFINE_ERROR(NonConvergent);
SICTA_DEFINE_ERROR(SeriesNotConverged);

#undef SICTA_DEFINE_ERROR

}  // namespace sicta
