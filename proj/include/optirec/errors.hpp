#pragma once

#include <stdexcept>
#include <string>

namespace optirec {

// Configuration / argument errors. CLI maps these to exit code 2.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numeric failures. CLI maps these to exit code 3.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct BracketFailure : std::runtime_error {
    explicit BracketFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct HermitianViolation : std::runtime_error {
    explicit HermitianViolation(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridTooNarrow : std::runtime_error {
    explicit GridTooNarrow(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConstraintViolation : std::runtime_error {
    explicit ConstraintViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Statistical insufficiency. CLI maps this to exit code 4.
struct InsufficientTrials : std::runtime_error {
    explicit InsufficientTrials(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace optirec
