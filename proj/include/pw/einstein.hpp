#pragma once

// Einstein classification (Ric(α, β) = λ g(α, β) on covectors) and the
// algebraic warping-function solvers for constant fiber curvature.

#include "pw/warped.hpp"

#include <optional>

namespace pw {

struct EinsteinVerdict {
    bool is_einstein = false;
    bool ricci_flat = false;
    /// Mean of the per-point estimates.
    double lambda_estimate = 0.0;
    /// max over points and coframe pairs of |Ric(dx^i, dx^j) − λ(p) g^{ij}|.
    double max_residual = 0.0;
    /// max − min of the per-point estimates.
    double lambda_spread = 0.0;
    std::vector<double> per_point_lambdas;
};

/// Least-squares λ(p) = Σ Ric_ij g^{ij} / Σ (g^{ij})² at each point. Einstein
/// when every pointwise residual and the spread of λ(p) are within tol.
EinsteinVerdict einstein_check(const PoissonManifold& m, std::span<const Point> points, double tol);

/// Conditions for the warped product to be Einstein with constant λ:
///   warp.einstein.base           Ric_B − λ g_B − (s2/f²)(2A − f H^f) = 0
///   warp.einstein.fiber          Ric_F = λ̃ g_F with constant λ̃
///   warp.einstein.fiber_constant λ̃ = [λ f² + (s2+1)‖J_B df‖² + f Δ(f)] / f⁴
/// plus "warp.einstein.agrees_with_product", which holds when the three
/// conditions together agree with einstein_check on the product chart.
/// λ defaults to the product estimate.
VerificationReport einstein_warp_conditions(const WarpedSpace& w, std::span<const Point> points, double tol,
                                            std::optional<double> lambda = std::nullopt);

struct WarpSolution {
    enum class Kind { ConstantF, None, AnyPositiveConstant };
    Kind kind = Kind::None;
    double f_value = 0.0;
    std::string rationale;
};

std::string to_string(WarpSolution::Kind k);

/// Constant f with S = μ1 when the fiber has constant scalar curvature μ and
/// the base has constant S_B: f² = (μ1 − S_B)/μ. Throws InvalidArgumentError
/// for μ = 0 or s2 < 2.
WarpSolution solve_constant_scalar(double s_b, double mu, double mu1, int s2);

/// Constant f for an Einstein product over Einstein factors: λ̂ f² = λ.
WarpSolution solve_einstein_warp(double lambda, double lambda_hat);

/// For a one-dimensional base with Π_B = 0: an Einstein product must have
/// λ ≈ 0, and the product is Einstein exactly when Ric_I and Ric_F vanish.
/// Throws InvalidArgumentError when the base is not of that form.
VerificationReport grw_ricci_flat_check(const WarpedSpace& w, std::span<const Point> points, double tol);

} // namespace pw
