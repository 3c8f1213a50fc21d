#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace curvekit {

// Base for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- jet engine ----
struct DegreeMismatch : Error {
    using Error::Error;
};
struct DivisionByZeroSeries : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct CompositionBasepointError : Error {
    using Error::Error;
};
struct InconsistentDegrees : Error {
    using Error::Error;
};

// ---- expression / model loading ----
struct ParseError : Error {
    ParseError(std::size_t byte_offset, std::vector<std::string> expected_tokens,
               const std::string& message)
        : Error(message), offset(byte_offset), expected(std::move(expected_tokens)) {}
    std::size_t offset;
    std::vector<std::string> expected;
};
struct UnknownIdentifier : Error {
    UnknownIdentifier(std::size_t byte_offset, const std::string& message)
        : Error(message), offset(byte_offset) {}
    std::size_t offset;
};
struct SchemaError : Error {
    using Error::Error;
};

// ---- geometry ----
struct RegularityError : Error {
    RegularityError(double mag, const std::string& message) : Error(message), magnitude(mag) {}
    double magnitude;
};
struct InflectionError : Error {
    InflectionError(double mag, const std::string& message) : Error(message), magnitude(mag) {}
    double magnitude;
};
struct NonUnitDirection : Error {
    using Error::Error;
};
struct ZeroTorsion : Error {
    using Error::Error;
};
struct NormalFormError : Error {
    using Error::Error;
};
struct NotAFlattening : Error {
    using Error::Error;
};
struct NotAVertex : Error {
    using Error::Error;
};
struct NotATwisting : Error {
    using Error::Error;
};
struct DegenerateDelta : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    NonConvergence(double lo, double hi, const std::string& message)
        : Error(message), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

// ---- strata / bifurcation ----
struct NoCuspAtOrigin : Error {
    using Error::Error;
};
struct LostTrack : Error {
    LostTrack(double s1, double s2, const std::string& message)
        : Error(message), last_s1(s1), last_s2(s2) {}
    double last_s1;
    double last_s2;
};
struct InsufficientPoints : Error {
    using Error::Error;
};
struct FrameAdaptationError : Error {
    using Error::Error;
};

// ---- io ----
struct EmptyPlot : Error {
    using Error::Error;
};

}  // namespace curvekit
