#pragma once

#include <stdexcept>
#include <string>

namespace dishts {

/// Error categories; the CLI maps each to a stable exit code.
enum class ErrorKind {
    Input,     // bad user input: files, flags, config values
    Numeric,   // non-finite values, divergence
    Internal,  // broken contracts, bugs
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    const char* category() const noexcept {
        switch (kind_) {
            case ErrorKind::Input: return "input";
            case ErrorKind::Numeric: return "numeric";
            case ErrorKind::Internal: return "internal";
        }
        return "internal";
    }

    static Error input(const std::string& msg) { return Error(ErrorKind::Input, msg); }
    static Error numeric(const std::string& msg) { return Error(ErrorKind::Numeric, msg); }
    static Error internal(const std::string& msg) { return Error(ErrorKind::Internal, msg); }

private:
    ErrorKind kind_;
};

}  // namespace dishts
