#pragma once

// JSON manifests: charts, named scalar fields, manifolds given by sparse
// bivector / cometric entry lists, warped products and task defaults.
//
//   {
//     "charts":    [{"name": "R2", "coords": ["x", "y"]}],
//     "fields":    [{"name": "h", "chart": "R2", "expr": "x*y"}],
//     "manifolds": [{"name": "poisson_x", "chart": "R2",
//                    "bivector": [{"i": "x", "j": "y", "expr": "x"}],
//                    "cometric": [{"i": 0, "j": 0, "expr": "1"}, {"i": 1, "j": 1, "expr": "1"}],
//                    "sampling": {"box": {"x": [-2, 2]}, "avoid": [{"expr": "x", "min_abs": 0.1}]}}],
//     "warped_products": [{"name": "w", "base": "...", "fiber": "...", "warp": "2 + sin(t)"}],
//     "tasks": [{"command": "warp-verify", "target": "w", "points": 100, "seed": 7, "tol": 1e-9}]
//   }
//
// Indices are integers or coordinate names. Bivector entries need i < j,
// cometric entries i <= j; anything unlisted is zero.

#include "pw/warped.hpp"

#include <map>
#include <optional>

namespace pw {

/// Manifest problems. `where` is a JSON path such as "manifolds[1].bivector[0]";
/// `position` is a character offset for expression or JSON syntax errors.
class ManifestError : public Error {
public:
    ManifestError(std::string kind, std::string where, const std::string& message,
                  std::optional<std::size_t> position = std::nullopt);

    const std::string& where() const noexcept { return where_; }
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::string where_;
    std::optional<std::size_t> position_;
};

struct FieldEntry {
    std::string name;
    Chart chart;
    ScalarField expr;
};

struct ManifoldEntry {
    PoissonManifold manifold;
    SamplingSpec sampling;
};

struct WarpedEntry {
    WarpedSpace space;
    SamplingSpec sampling;
};

struct TaskEntry {
    std::string command;
    std::string target;
    /// Numeric parameters such as points, seed, tol, lambda.
    std::map<std::string, double> params;
};

struct Manifest {
    std::string source;
    std::vector<Chart> charts;
    std::vector<FieldEntry> fields;
    std::vector<ManifoldEntry> manifolds;
    std::vector<WarpedEntry> warped;
    std::vector<TaskEntry> tasks;

    const ManifoldEntry* find_manifold(std::string_view name) const;
    const WarpedEntry* find_warped(std::string_view name) const;
    const TaskEntry* find_task(std::string_view command) const;
};

Manifest parse_manifest(std::string_view text, std::string source = "<memory>");
Manifest load_manifest(const std::string& path);

} // namespace pw
