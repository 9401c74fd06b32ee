#pragma once

#include <stdexcept>
#include <string>

namespace pbsearch {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid UTF-8 or otherwise undecodable input text.
struct EncodingError : Error {
    using Error::Error;
};

/// Input violates a documented precondition or data invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Caller misuse of an operation (e.g. pairwise with fewer than two documents).
struct UsageError : Error {
    using Error::Error;
};

/// A persisted file could not be loaded. `kind` distinguishes the failure
/// classes callers may want to handle separately.
struct LoadError : Error {
    enum class Kind {
        BadMagic,
        BadVersion,
        Truncated,
        BadChecksum,
        BadSection,
    };

    LoadError(Kind k, const std::string& what) : Error(what), kind(k) {}

    Kind kind;
};

} // namespace pbsearch
