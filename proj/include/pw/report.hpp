#pragma once

// Verification results shared by the warped, einstein and cli modules.

#include <cstdint>
#include <string>
#include <vector>

namespace pw {

struct Check {
    std::string name;
    std::string target;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::size_t points = 0;
    std::uint64_t seed = 0;
    std::string note;
};

/// An informational number that is reported but never gates the exit code.
struct Diagnostic {
    std::string name;
    std::string target;
    double value = 0.0;
    std::string note;
};

struct VerificationReport {
    std::vector<Check> checks;
    std::vector<Diagnostic> diagnostics;

    /// Adds a residual check; passes when max_residual <= tolerance.
    Check& add(std::string name, std::string target, double max_residual, double tolerance, std::size_t points,
               std::uint64_t seed, std::string note = {});
    /// Adds a check whose residual is a lower bound that must be reached
    /// (e.g. "the residual is at least 0.5 somewhere").
    Check& add_at_least(std::string name, std::string target, double max_residual, double threshold,
                        std::size_t points, std::uint64_t seed, std::string note = {});
    /// Adds a yes/no check.
    Check& add_flag(std::string name, std::string target, bool passed, std::string note = {});

    void append(const VerificationReport& other);

    std::size_t passed() const;
    std::size_t failed() const { return checks.size() - passed(); }
    bool all_passed() const { return failed() == 0; }
    const Check* find(std::string_view name) const;
};

/// Running max of |x|, with NaN treated as +infinity so it can never pass.
class MaxAbs {
public:
    void add(double x);
    void merge(const MaxAbs& o) { add(o.value_); }
    double value() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

/// |direct − oracle| / max(1, |direct|).
double relative_residual(double direct, double oracle);

} // namespace pw
