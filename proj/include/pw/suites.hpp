#pragma once

// Point-sampled verification suites over one manifold or warped product.
// Each returns a report whose checks gate the CLI exit code; diagnostics
// carry values that are reported but never gate.

#include "pw/einstein.hpp"
#include "pw/manifest.hpp"

namespace pw {

struct RunOptions {
    std::size_t points = kDefaultPoints;
    std::uint64_t seed = kDefaultSeed;
    double tol = kDefaultTolerance;
};

/// Fixed thresholds for the Koszul bracket identities.
inline constexpr double kKoszulRuleTolerance = 1e-12;
inline constexpr double kKoszulDefinitionTolerance = 1e-10;

/// Cometric invertible at every point; Jacobi residual as diagnostics.
VerificationReport validate_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// Torsion and metric compatibility of Γ, Koszul coordinate rule and
/// agreement with the Lie-derivative definition.
VerificationReport connection_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// Antisymmetry of R^{ijk}_l in (i, j); tensoriality on non-constant covectors
/// (a check for Poisson Π, a diagnostic otherwise).
VerificationReport curvature_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// Symmetry of Ric (check for Poisson Π) and its values at the first point.
VerificationReport ricci_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// S against the g̃-trace of the contracted curvature tensor; range of S.
VerificationReport scalar_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// Δ against the Hessian trace and linearity, for the given functions.
VerificationReport laplacian_suite(const PoissonManifold& m, const std::vector<FieldEntry>& functions,
                                   std::span<const Point> points, const RunOptions& o);
/// Max |(D_{dx^i} Π)(dx^j, dx^k)|; fails when Π is not parallel.
VerificationReport compat_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);
/// einstein_check as a report: one flag that passes iff the space is Einstein.
VerificationReport einstein_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o);

/// Sharp/bracket splitting and the block formulas for D, R, Ric and S.
VerificationReport warp_verify_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o);
/// Product DΠ with the factor residuals as diagnostics.
VerificationReport warp_compat_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o);
/// einstein_suite on the product plus the warp conditions, and the
/// GRW check when the base is a one-dimensional interval with Π_B = 0.
VerificationReport warp_einstein_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o);

} // namespace pw
