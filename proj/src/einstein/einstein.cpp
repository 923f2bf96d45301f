#include "pw/einstein.hpp"

#include "pw/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace pw {

namespace {

using Vec = std::vector<double>;

Vec unit(std::size_t n, std::size_t i)
{
    Vec v(n, 0.0);
    v[i] = 1.0;
    return v;
}

struct PointFit {
    double lambda = 0.0;
    double residual = 0.0;
};

// Least-squares fit of ric = λ g over all n² entries.
PointFit fit(const Vec& ric, const Vec& g)
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        num += ric[k] * g[k];
        den += g[k] * g[k];
    }
    PointFit r;
    r.lambda = den > 0.0 ? num / den : 0.0;
    MaxAbs m;
    for (std::size_t k = 0; k < g.size(); ++k)
        m.add(ric[k] - r.lambda * g[k]);
    r.residual = m.value();
    return r;
}

Vec cometric_values(const LocalConnection& c)
{
    const std::size_t n = c.dim();
    Vec g(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g[i * n + j] = c.geometry().g(i, j).value();
    return g;
}

double spread(const Vec& xs)
{
    if (xs.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const double s = *hi - *lo;
    return std::isnan(s) ? std::numeric_limits<double>::infinity() : s;
}

double mean(const Vec& xs)
{
    if (xs.empty())
        return 0.0;
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

} // namespace

EinsteinVerdict einstein_check(const PoissonManifold& m, std::span<const Point> points, double tol)
{
    const auto fits = parallel_map(points.size(), [&](std::size_t i) {
        const LocalConnection c(m, points[i]);
        return fit(c.ricci_matrix(), cometric_values(c));
    });

    EinsteinVerdict v;
    MaxAbs res;
    for (const auto& f : fits) {
        v.per_point_lambdas.push_back(f.lambda);
        res.add(f.residual);
    }
    v.max_residual = res.value();
    v.lambda_estimate = mean(v.per_point_lambdas);
    v.lambda_spread = spread(v.per_point_lambdas);
    v.is_einstein = v.max_residual <= tol && v.lambda_spread <= tol;
    v.ricci_flat = v.is_einstein && std::abs(v.lambda_estimate) <= tol;
    return v;
}

VerificationReport einstein_warp_conditions(const WarpedSpace& w, std::span<const Point> points, double tol,
                                            std::optional<double> lambda)
{
    const EinsteinVerdict product = einstein_check(w.product(), points, tol);
    const double lam = lambda.value_or(product.lambda_estimate);
    const std::size_t s1 = w.s1(), s2 = w.s2();

    struct Row {
        double base = 0.0;
        PointFit fiber;
        double predicted = 0.0;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const WarpedOracle o(w, points[idx]);
        const double f = o.f();
        Row r;
        MaxAbs base;
        for (std::size_t i = 0; i < s1; ++i)
            for (std::size_t j = 0; j < s1; ++j) {
                const Vec a = unit(s1, i), b = unit(s1, j);
                const double gb = o.base_connection().geometry().g(i, j).value();
                const double rhs = lam * gb + s2 / (f * f) * (2.0 * o.a_form(a, b) - f * o.base_hessian(a, b));
                base.add(o.base_connection().ricci(a, b) - rhs);
            }
        r.base = base.value();
        r.fiber = fit(o.fiber_connection().ricci_matrix(), cometric_values(o.fiber_connection()));
        r.predicted =
            (lam * f * f + (s2 + 1.0) * o.j1df_norm2() + f * o.base_laplacian()) / (f * f * f * f);
        return r;
    });

    MaxAbs base, fiber, constant;
    Vec fiber_lambdas;
    for (const auto& r : rows) {
        base.add(r.base);
        fiber.add(r.fiber.residual);
        constant.add(r.fiber.lambda - r.predicted);
        fiber_lambdas.push_back(r.fiber.lambda);
    }
    fiber.add(spread(fiber_lambdas));

    VerificationReport rep;
    const std::size_t n = points.size();
    const auto& a = rep.add("warp.einstein.base", w.name(), base.value(), tol, n, 0,
                            "Ric_B - lambda g_B - (s2/f^2)(2A - f H)");
    const auto& b = rep.add("warp.einstein.fiber", w.name(), fiber.value(), tol, n, 0,
                            "fiber Einstein with constant lambda_fiber");
    const auto& c = rep.add("warp.einstein.fiber_constant", w.name(), constant.value(), tol, n, 0,
                            "lambda_fiber against the value forced by lambda, f and J_B df");
    const bool conditions = a.passed && b.passed && c.passed;
    rep.add_flag("warp.einstein.agrees_with_product", w.name(), conditions == product.is_einstein,
                 std::string("conditions ") + (conditions ? "hold" : "fail") + ", product " +
                     (product.is_einstein ? "is" : "is not") + " Einstein");
    rep.diagnostics.push_back({"warp.einstein.lambda", w.name(), lam, lambda ? "supplied" : "product estimate"});
    rep.diagnostics.push_back({"warp.einstein.lambda_fiber", w.name(), mean(fiber_lambdas), "mean over points"});
    rep.diagnostics.push_back({"warp.einstein.product_residual", w.name(), product.max_residual, ""});
    return rep;
}

std::string to_string(WarpSolution::Kind k)
{
    switch (k) {
    case WarpSolution::Kind::ConstantF:
        return "constant-f";
    case WarpSolution::Kind::None:
        return "none";
    case WarpSolution::Kind::AnyPositiveConstant:
        return "any-positive-constant";
    }
    return "none";
}

WarpSolution solve_constant_scalar(double s_b, double mu, double mu1, int s2)
{
    if (mu == 0.0)
        throw InvalidArgumentError("fiber scalar curvature mu must be nonzero");
    if (s2 < 2)
        throw InvalidArgumentError("fiber dimension s2 must be at least 2 (got " +
                                   std::to_string(s2) + ")");
    using K = WarpSolution::Kind;
    if (mu1 == s_b)
        return {K::None, 0.0, "mu1 = S_B: no warping function"};
    const double q = (mu1 - s_b) / mu;
    if (q > 0.0) {
        const char* why = mu > 0.0 ? "mu1 > S_B and mu > 0: f = sqrt((mu1 - S_B)/mu)"
                                   : "mu1 < S_B and mu < 0: f = sqrt((mu1 - S_B)/mu)";
        return {K::ConstantF, std::sqrt(q), why};
    }
    return {K::None, 0.0, "mu1 - S_B and mu have opposite signs: f^2 = (mu1 - S_B)/mu has no positive solution"};
}

WarpSolution solve_einstein_warp(double lambda, double lambda_hat)
{
    using K = WarpSolution::Kind;
    if (lambda == 0.0 && lambda_hat == 0.0)
        return {K::AnyPositiveConstant, 0.0, "lambda = lambda_hat = 0: every positive constant f (Ricci-flat)"};
    if (lambda == 0.0 || lambda_hat == 0.0)
        return {K::None, 0.0, "exactly one of lambda, lambda_hat is zero: lambda_hat f^2 = lambda has no positive solution"};
    if (lambda * lambda_hat > 0.0) {
        const char* why = lambda_hat > 0.0 ? "lambda_hat > 0 and lambda > 0: f = sqrt(lambda/lambda_hat)"
                                           : "lambda_hat < 0 and lambda < 0: f = sqrt(lambda/lambda_hat)";
        return {K::ConstantF, std::sqrt(lambda / lambda_hat), why};
    }
    const char* why = lambda_hat > 0.0 ? "lambda_hat > 0 and lambda < 0: no warping function"
                                       : "lambda_hat < 0 and lambda > 0: no warping function";
    return {K::None, 0.0, why};
}

VerificationReport grw_ricci_flat_check(const WarpedSpace& w, std::span<const Point> points, double tol)
{
    if (w.s1() != 1 || !w.base().pi.is_zero())
        throw InvalidArgumentError("warped product '" + w.name() +
                                   "': expected a one-dimensional base with zero bivector");
    const EinsteinVerdict v = einstein_check(w.product(), points, tol);

    struct Row {
        double base = 0.0;
        double fiber = 0.0;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const WarpedOracle o(w, points[idx]);
        MaxAbs fib;
        for (double x : o.fiber_connection().ricci_matrix())
            fib.add(x);
        return Row{std::abs(o.base_connection().ricci(unit(1, 0), unit(1, 0))), fib.value()};
    });
    MaxAbs base, fiber;
    for (const auto& r : rows) {
        base.add(r.base);
        fiber.add(r.fiber);
    }
    const bool blocks_flat = base.value() <= tol && fiber.value() <= tol;

    VerificationReport rep;
    rep.add_flag("grw.einstein_forces_ricci_flat", w.name(), !v.is_einstein || std::abs(v.lambda_estimate) <= tol,
                 "lambda estimate " + std::to_string(v.lambda_estimate));
    rep.add_flag("grw.blocks_flat_iff_einstein", w.name(), blocks_flat == v.is_einstein,
                 std::string("Ric_I and Ric_F ") + (blocks_flat ? "vanish" : "do not vanish") + ", product " +
                     (v.is_einstein ? "is" : "is not") + " Einstein");
    rep.diagnostics.push_back({"grw.lambda", w.name(), v.lambda_estimate, ""});
    rep.diagnostics.push_back({"grw.ricci_base", w.name(), base.value(), "max |Ric_I|"});
    rep.diagnostics.push_back({"grw.ricci_fiber", w.name(), fiber.value(), "max |Ric_F|"});
    return rep;
}

} // namespace pw
