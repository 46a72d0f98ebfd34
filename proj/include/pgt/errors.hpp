#pragma once

#include <stdexcept>
#include <string>

namespace pgt {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PGT_DEFINE_ERROR(Name)                  \
    struct Name : Error {                       \
        using Error::Error;                     \
    }

PGT_DEFINE_ERROR(DomainError);
PGT_DEFINE_ERROR(DivisionByZero);
PGT_DEFINE_ERROR(NotSplitRegular);
PGT_DEFINE_ERROR(UndecidableAtBound);
PGT_DEFINE_ERROR(NotUnit);
PGT_DEFINE_ERROR(Reducible);
PGT_DEFINE_ERROR(BoxTooLarge);
PGT_DEFINE_ERROR(SearchExhausted);
PGT_DEFINE_ERROR(NonIntegralResult);
PGT_DEFINE_ERROR(CapExceeded);
PGT_DEFINE_ERROR(Incomplete);
PGT_DEFINE_ERROR(TailBoundUnavailable);
PGT_DEFINE_ERROR(QuadratureNotConverged);
PGT_DEFINE_ERROR(DerivativeUnavailable);
PGT_DEFINE_ERROR(PrecisionExhausted);

#undef PGT_DEFINE_ERROR

}  // namespace pgt
