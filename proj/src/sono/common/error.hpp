#pragma once

#include <stdexcept>
#include <string>

namespace sono {

/// Caller passed something the operation's preconditions reject.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File system or device failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed persisted data (registry JSON, WAV headers, config files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A feature that needs platform support this build does not have.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sono
