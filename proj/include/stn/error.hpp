#pragma once

#include <stdexcept>
#include <string>

namespace stn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// File could not be read, parsed or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// The external neural noise synthesizer failed or could not be reached.
class BackendError : public Error {
public:
    enum class Kind { Unavailable, Timeout, Failed, ContractViolation };

    BackendError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Loudness of a signal cannot be measured (silent or shorter than one gating block).
class UnmeasurableLoudness : public Error {
public:
    UnmeasurableLoudness() : Error("unmeasurable loudness") {}
};

[[noreturn]] void throw_invalid(const std::string& what);

inline void require(bool condition, const char* what)
{
    if (!condition) throw_invalid(what);
}

}  // namespace stn
