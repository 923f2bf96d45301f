#include "pw/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pw {

Check& VerificationReport::add(std::string name, std::string target, double max_residual, double tolerance,
                               std::size_t points, std::uint64_t seed, std::string note)
{
    Check c{std::move(name), std::move(target), max_residual, tolerance, max_residual <= tolerance, points, seed,
            std::move(note)};
    checks.push_back(std::move(c));
    return checks.back();
}

Check& VerificationReport::add_at_least(std::string name, std::string target, double max_residual, double threshold,
                                        std::size_t points, std::uint64_t seed, std::string note)
{
    Check& c = add(std::move(name), std::move(target), max_residual, threshold, points, seed, std::move(note));
    c.passed = max_residual >= threshold;
    if (c.note.empty())
        c.note = "residual must reach the tolerance";
    return c;
}

Check& VerificationReport::add_flag(std::string name, std::string target, bool passed, std::string note)
{
    Check c;
    c.name = std::move(name);
    c.target = std::move(target);
    c.passed = passed;
    c.max_residual = passed ? 0.0 : 1.0;
    c.note = std::move(note);
    checks.push_back(std::move(c));
    return checks.back();
}

void VerificationReport::append(const VerificationReport& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
}

std::size_t VerificationReport::passed() const
{
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; }));
}

const Check* VerificationReport::find(std::string_view name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

void MaxAbs::add(double x)
{
    if (std::isnan(x))
        value_ = std::numeric_limits<double>::infinity();
    else
        value_ = std::max(value_, std::abs(x));
}

double relative_residual(double direct, double oracle)
{
    return std::abs(direct - oracle) / std::max(1.0, std::abs(direct));
}

} // namespace pw
