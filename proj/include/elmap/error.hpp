#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elmap {

enum class ErrorKind {
    dimension,
    empty_input,
    argument,
    capability,
    size,
    parse,
    degenerate,
    io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::dimension: return "dimension error";
        case ErrorKind::empty_input: return "empty input";
        case ErrorKind::argument: return "argument error";
        case ErrorKind::capability: return "capability error";
        case ErrorKind::size: return "size error";
        case ErrorKind::parse: return "parse error";
        case ErrorKind::degenerate: return "degenerate input";
        case ErrorKind::io: return "i/o error";
    }
    return "error";
}

// All library failures are reported through this type; kind() drives CLI exit codes.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message)
      , kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace elmap
