#pragma once
#include <stdexcept>
#include <string>

namespace latq {

// Bad input from a caller or a file: CLI maps these to exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that cannot proceed (singular matrix, divergence, cap hit):
// CLI maps these to exit code 1.
struct ComputeError : std::runtime_error {
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : UsageError {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : UsageError(msg + " at line " + std::to_string(line_) + ", column " +
                     std::to_string(col_)),
          line(line_), col(col_) {}
};

struct FieldMismatch : UsageError {
    explicit FieldMismatch(const std::string& msg) : UsageError(msg) {}
};

}  // namespace latq
