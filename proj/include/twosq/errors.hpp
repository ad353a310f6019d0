// Error taxonomy shared by all modules.  Each condition named in an
// operation contract maps to one exception type so callers (CLI, bindings,
// tests) can distinguish them.
#pragma once

#include <stdexcept>
#include <string>

namespace twosq {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TWOSQ_DEFINE_ERROR(Name)                                    \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(msg) {}       \
    }

TWOSQ_DEFINE_ERROR(NotCoprime);
TWOSQ_DEFINE_ERROR(LimitExceeded);
TWOSQ_DEFINE_ERROR(NotPositiveDefinite);
TWOSQ_DEFINE_ERROR(NonIntegralStar);
TWOSQ_DEFINE_ERROR(NoValidInverse);
TWOSQ_DEFINE_ERROR(EvenModulus);
TWOSQ_DEFINE_ERROR(ToleranceNotMet);
TWOSQ_DEFINE_ERROR(PrecisionExhausted);
TWOSQ_DEFINE_ERROR(IndeterminateComparison);
TWOSQ_DEFINE_ERROR(SearchExhausted);
TWOSQ_DEFINE_ERROR(OverflowError);
TWOSQ_DEFINE_ERROR(InvalidConfig);
TWOSQ_DEFINE_ERROR(DecompositionMismatch);

#undef TWOSQ_DEFINE_ERROR

}  // namespace twosq
