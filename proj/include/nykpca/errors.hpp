#pragma once

#include <stdexcept>
#include <string>

namespace nykpca {

// Error taxonomy mirrored by the C API status codes and the CLI exit codes:
//   UsageError   -> bad arguments, violated preconditions, bad config (exit 2)
//   FormatError  -> malformed input files (exit 3)
//   NumericError -> factorization/eigensolver failures (exit 4)
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nykpca
