#pragma once

#include <stdexcept>
#include <string>

namespace pw {

/// Base of every error raised by the library. `kind()` is a stable short tag
/// used in structured CLI error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ChartMismatchError : public Error {
public:
    explicit ChartMismatchError(const std::string& message) : Error("chart_mismatch", message) {}
};

class SingularCometricError : public Error {
public:
    explicit SingularCometricError(const std::string& message) : Error("singular_cometric", message) {}
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& message) : Error("invalid_argument", message) {}
};

} // namespace pw
