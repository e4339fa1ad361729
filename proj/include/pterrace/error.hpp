#pragma once

#include <stdexcept>
#include <string>

namespace pterrace {

/// Broad failure classes. The C API and the CLI map these onto status codes
/// and process exit codes respectively.
enum class ErrorKind {
    InvalidArgument,  // bad parameter passed to an operation
    Config,           // malformed or inconsistent pipeline configuration
    Data,             // unreadable or malformed input data
    Io,               // file could not be opened or written
    Compute,          // a numerical stage could not produce a result
    OutOfRange,       // index outside a valid range
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace pterrace
