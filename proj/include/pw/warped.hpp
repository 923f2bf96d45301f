#pragma once

// Warped products B ×_f F with bivector Π = Π_B + Π_F and cometric
// g^f = g_B^h + (1/(f^h)²) g_F^v on the chart (base coordinates, fiber
// coordinates). Lifts pad with zeros on the other factor.
//
// WarpedOracle evaluates the closed-form block formulas for D, R, Ric and S
// from factor data only (factor connections, f, J_B df). verify_decomposition
// compares them against the connection module run on the product chart.

#include "pw/connection.hpp"
#include "pw/report.hpp"
#include "pw/sampling.hpp"

#include <optional>

namespace pw {

class WarpedSpace {
public:
    /// Throws InvalidArgumentError when base and fiber share a coordinate name
    /// or f references anything but base coordinates.
    WarpedSpace(std::string name, PoissonManifold base, PoissonManifold fiber, ScalarField f);

    const std::string& name() const noexcept { return name_; }
    const PoissonManifold& base() const noexcept { return base_; }
    const PoissonManifold& fiber() const noexcept { return fiber_; }
    const PoissonManifold& product() const noexcept { return product_; }
    const Chart& chart() const noexcept { return product_.chart; }
    const ScalarField& warp() const noexcept { return f_; }
    const SmoothField& warp_smooth() const noexcept { return f_smooth_; }
    std::size_t s1() const noexcept { return base_.chart.dim(); }
    std::size_t s2() const noexcept { return fiber_.chart.dim(); }

    std::vector<double> lift_h(std::span<const double> base_covector) const;
    std::vector<double> lift_v(std::span<const double> fiber_covector) const;
    CovectorField horizontal_lift(const CovectorField& alpha) const;
    CovectorField vertical_lift(const CovectorField& alpha) const;

    /// Throws InvalidArgumentError if f <= 0 (or is undefined) at a point.
    void require_positive_warp(std::span<const Point> points) const;

    /// Product sampling: per-factor boxes and avoid lists merged.
    static SamplingSpec product_sampling(const SamplingSpec& base, const SamplingSpec& fiber);

private:
    std::string name_;
    PoissonManifold base_;
    PoissonManifold fiber_;
    ScalarField f_;
    SmoothField f_smooth_;
    PoissonManifold product_;
};

/// Validating constructor: also checks f > 0 at the given points.
WarpedSpace build_warped(std::string name, PoissonManifold base, PoissonManifold fiber, ScalarField f,
                         std::span<const Point> points);

/// Product-chart sharp map and Koszul bracket against the lifted factor
/// computations, over the coordinate covectors of each factor.
VerificationReport sharp_decomposition_check(const WarpedSpace& w, std::span<const Point> points, double tol,
                                             std::uint64_t seed = kDefaultSeed);

/// Closed-form block formulas at one product point. Covector inputs are
/// constant factor covectors given by their components; covector outputs are
/// product-chart components.
class WarpedOracle {
public:
    WarpedOracle(const WarpedSpace& w, const Point& p);

    double f() const noexcept { return f_.value(); }
    /// J_B df at the point.
    std::vector<double> j1df() const;
    /// ‖J_B df‖²_B.
    double j1df_norm2() const;
    /// Δ^{D^B}(f).
    double base_laplacian() const;
    /// H^f_{Π_B}(α1, β1) on the base.
    double base_hessian(const std::vector<double>& a1, const std::vector<double>& b1) const;
    bool casimir(double tol) const;

    using Vec = std::vector<double>;

    Vec connection_hh(const Vec& a1, const Vec& b1) const;
    Vec connection_vv(const Vec& a2, const Vec& b2) const;
    /// D_{α1^h} β2^v, which equals D_{β2^v} α1^h.
    Vec connection_hv(const Vec& a1, const Vec& b2) const;

    /// R(α1^h, β1^h)(γ1^h + γ2^v).
    Vec curvature_hh(const Vec& a1, const Vec& b1, const Vec& c1, const Vec& c2) const;
    /// R(α1^h, β2^v) γ1^h.
    Vec curvature_hv_h(const Vec& a1, const Vec& b2, const Vec& c1) const;
    /// R(α1^h, β2^v) γ2^v.
    Vec curvature_hv_v(const Vec& a1, const Vec& b2, const Vec& c2) const;
    /// R(α2^v, β2^v) γ1^h (identically zero).
    Vec curvature_vv_h(const Vec& a2, const Vec& b2, const Vec& c1) const;
    /// R(α2^v, β2^v) γ2^v = [R_F(α2,β2)γ2]^v + (‖J_B df‖²/f⁴)[g_F(α2,γ2)β2 − g_F(β2,γ2)α2]^v.
    Vec curvature_vv_v(const Vec& a2, const Vec& b2, const Vec& c2) const;
    /// The same formula with the factor-curvature term replaced by a base
    /// curvature term evaluated on fiber covectors, which has no meaning; it
    /// contributes nothing, so only the second term remains.
    Vec curvature_vv_v_base_term(const Vec& a2, const Vec& b2, const Vec& c2) const;

    /// A(α1, β1) = g_B(J_B df, α1) g_B(J_B df, β1).
    double a_form(const Vec& a1, const Vec& b1) const;
    double ricci_hh(const Vec& a1, const Vec& b1) const;
    double ricci_hv(const Vec& a1, const Vec& b2) const;
    double ricci_vv(const Vec& a2, const Vec& b2) const;
    double scalar() const;

    /// Casimir-f forms: Ric_B^h, 0, Ric_F^v and S_B + f² S_F.
    double ricci_hh_casimir(const Vec& a1, const Vec& b1) const;
    double ricci_vv_casimir(const Vec& a2, const Vec& b2) const;
    double scalar_casimir() const;

    const LocalConnection& base_connection() const noexcept { return base_; }
    const LocalConnection& fiber_connection() const noexcept { return fiber_; }

private:
    double gb(const Vec& a, const Vec& b) const;
    double gf(const Vec& a, const Vec& b) const;
    /// D^B_{α1} J_B df at the point.
    Vec base_d_j1df(const Vec& a1) const;

    const WarpedSpace* w_;
    LocalConnection base_;
    LocalConnection fiber_;
    Jet f_;
    ComponentJets j1df_;
};

/// Runs every block formula against the product-chart computation at each
/// point. Residuals are |direct − oracle| / max(1, |direct|). When f is a
/// Casimir function of Π_B at all points, the Casimir forms are checked too.
VerificationReport verify_decomposition(const WarpedSpace& w, std::span<const Point> points, double tol,
                                        std::uint64_t seed = kDefaultSeed);

/// DΠ on the product against DΠ_B and DΠ_F, at the given product points.
struct CompatibilitySplit {
    double product = 0.0;
    double base = 0.0;
    double fiber = 0.0;
};
CompatibilitySplit compatibility_split(const WarpedSpace& w, std::span<const Point> points);

} // namespace pw
