#pragma once

// Command dispatch for the `pw` tool. run() never throws: library errors
// become a structured error record and exit code 2.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pw::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

enum class Format { Text, Json };

struct Options {
    std::string command;
    std::string manifest;
    std::string target;
    std::optional<std::size_t> points;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    Format format = Format::Text;
    std::optional<double> lambda;
    std::optional<double> lambda_hat;
    std::optional<double> sb;
    std::optional<double> mu;
    std::optional<double> mu1;
    std::optional<int> s2;
};

const std::vector<std::string>& commands();

/// Runs one command, writing the report (or error record) to `out` and, for
/// text errors, a one-line message to `err`. Returns the exit code.
int run(const Options& o, std::ostream& out, std::ostream& err);

} // namespace pw::cli
