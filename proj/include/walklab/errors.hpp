#pragma once

#include <stdexcept>
#include <string>

namespace walklab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define WALKLAB_DEFINE_ERROR(Name) \
    struct Name : Error {          \
        using Error::Error;        \
    }

WALKLAB_DEFINE_ERROR(RangeError);
WALKLAB_DEFINE_ERROR(DegenerateCoin);
WALKLAB_DEFINE_ERROR(MarginViolation);
WALKLAB_DEFINE_ERROR(DomainError);
WALKLAB_DEFINE_ERROR(CapExceeded);
WALKLAB_DEFINE_ERROR(GridTooCoarse);
WALKLAB_DEFINE_ERROR(SupportMismatch);
WALKLAB_DEFINE_ERROR(SizeCap);
WALKLAB_DEFINE_ERROR(ConvergenceError);
WALKLAB_DEFINE_ERROR(NonFinite);
WALKLAB_DEFINE_ERROR(DivergentLog);
WALKLAB_DEFINE_ERROR(UnsupportedBias);
WALKLAB_DEFINE_ERROR(ConfigError);
WALKLAB_DEFINE_ERROR(IoError);

#undef WALKLAB_DEFINE_ERROR

}  // namespace walklab
