#pragma once

#include <stdexcept>
#include <string>

namespace hpcsocial {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input trace could not be read or violates the record contract.
class TraceError : public Error {
public:
    using Error::Error;
};

/// Invalid thresholds, generator settings or command-line values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition (e.g. out-of-order arrival).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace hpcsocial
