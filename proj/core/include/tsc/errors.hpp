#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsc {

/// Base class for all tscalc errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInTimeScale : Error {
    using Error::Error;
};

struct EmptyRange : Error {
    using Error::Error;
};

/// Raised when an operation needs sup T = infinity but the tail is window-only.
struct UnboundedWindowOnly : Error {
    using Error::Error;
};

struct NotRegressive : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

struct NonDifferentiable : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct OutsideRegion : Error {
    using Error::Error;
};

struct NonConstantGraininess : Error {
    using Error::Error;
};

/// The sigma-shift characteristic identity cannot be tested at a right-dense
/// boundary point; reported instead of silently asserting.
struct DenseBoundary : Error {
    using Error::Error;
};

/// Expression or file parse error; carries the byte offset (expressions) or
/// is prefixed with "line N:" (time-scale files).
struct SyntaxError : Error {
    std::size_t offset = 0;
    SyntaxError(const std::string& what, std::size_t off) : Error(what), offset(off) {}
};

struct UnknownFunction : Error {
    using Error::Error;
};

}  // namespace tsc
