#pragma once

#include <stdexcept>
#include <string>

namespace gf2gen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A family required to be independent turned out dependent.
struct DependentFamilyError : Error {
    using Error::Error;
};

/// Basis completion was asked for with too little room left in the
/// ambient space (the quotient would be smaller than the configured
/// minimum codimension).
struct CodimensionError : Error {
    using Error::Error;
};

/// No candidate column of a scheduled table passed the independence
/// requirement; the truncated candidate set was too short.
struct ClaimSearchExhaustedError : Error {
    using Error::Error;
};

/// A scheduled table or task reaches indices at or above its stage.
struct ScheduleSupportError : Error {
    using Error::Error;
};

/// A density window exceeds the configured enumeration budget.
struct WindowBudgetError : Error {
    using Error::Error;
};

/// Config or certificate file failed structural validation. Carries the
/// offending field path in the message.
struct ValidationError : Error {
    using Error::Error;
};

struct MalformedCertificateError : Error {
    using Error::Error;
};

}  // namespace gf2gen
