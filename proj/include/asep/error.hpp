#pragma once

#include <stdexcept>
#include <string>

namespace asep {

enum class ErrorKind {
    invalid_input,
    unsupported_size,
    unsupported_window,
    unsupported_range,
    numerical_failure,
    configuration_error,
    io_error,
    invalid_sample,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::unsupported_size: return "unsupported-size";
    case ErrorKind::unsupported_window: return "unsupported-window";
    case ErrorKind::unsupported_range: return "unsupported-range";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::configuration_error: return "configuration-error";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::invalid_sample: return "invalid-sample";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}
    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; } // message without the kind prefix

private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace asep
