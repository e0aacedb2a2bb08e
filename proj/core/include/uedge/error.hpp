#pragma once

#include <stdexcept>
#include <string>

namespace uedge {

/// Raised when an argument violates an operation's preconditions.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised on filesystem / serialization failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the optimizer encounters a non-finite loss. Carries a
/// human-readable diagnostic; the trainer additionally dumps state to disk.
class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uedge
