#pragma once

#include <stdexcept>
#include <string>

namespace rvc {

// Error taxonomy shared by the C++ core, the C API status codes and the CLI
// exit codes. Keep the enum values stable; the C header mirrors them.
enum class ErrorKind {
    invalid_argument = 1,
    parse = 2,
    insufficient_data = 3,
    not_found = 4,
    numerical = 5,
    degenerate_data = 6,
    io = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace rvc
