#include "pw/suites.hpp"

#include "pw/parallel.hpp"

#include <cmath>

namespace pw {

namespace {

using Vec = std::vector<double>;

double rel(double direct, double other) { return relative_residual(direct, other); }

// Non-constant test covectors, fixed so that reports are reproducible.
CovectorField test_covector(const Chart& c, int which)
{
    const auto& x = c.coords();
    const std::size_t n = c.dim();
    std::vector<ScalarField> comps;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& a = x[i];
        const std::string& b = x[(i + 1) % n];
        std::string text;
        switch (which) {
        case 0:
            text = a + "^2 - " + b;
            break;
        case 1:
            text = "sin(" + b + ") * " + a;
            break;
        default:
            text = "exp(" + a + "/3) + " + a + "*" + b;
        }
        comps.push_back(expr::parse(text, x));
    }
    return {c, std::move(comps)};
}

double max_of(const std::vector<double>& xs)
{
    MaxAbs m;
    for (double x : xs)
        m.add(x);
    return m.value();
}

double max_jacobi(const PoissonManifold& m, std::span<const Point> points)
{
    const auto rows = parallel_map(points.size(), [&](std::size_t i) { return max_of(jacobi_residual(m.pi, points[i])); });
    return max_of(rows);
}

std::string coordinate_pair(const Chart& c, std::size_t i, std::size_t j)
{
    return c.coords()[i] + "," + c.coords()[j];
}

} // namespace

VerificationReport validate_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    struct Row {
        bool ok = true;
        double condition = 0.0;
        std::string message;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t i) {
        Row r;
        try {
            r.condition = LocalGeometry(m, points[i], 0).cometric_condition();
        } catch (const SingularCometricError& e) {
            r.ok = false;
            r.message = e.what();
        }
        return r;
    });
    bool ok = true;
    double worst = 0.0;
    std::string first_error;
    for (const auto& r : rows) {
        if (!r.ok && ok)
            first_error = r.message;
        ok = ok && r.ok;
        worst = std::max(worst, r.condition);
    }
    VerificationReport rep;
    rep.add_flag("cometric.nonsingular", m.name, ok, first_error);
    const double jac = max_jacobi(m, points);
    rep.diagnostics.push_back({"cometric.max_condition", m.name, worst, ""});
    rep.diagnostics.push_back({"bivector.jacobi", m.name, jac, jac <= o.tol ? "Poisson" : "not Poisson"});
    return rep;
}

VerificationReport connection_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const Chart& c = m.chart;
    const std::size_t n = c.dim();
    std::vector<CovectorField> brackets, dpi;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            brackets.push_back(koszul_bracket(m.pi, CovectorField::basis(c, i), CovectorField::basis(c, j)));
            dpi.push_back(differential(c, m.pi.entry(i, j)));
        }
    const CovectorField a = test_covector(c, 0), b = test_covector(c, 1);
    const CovectorField by_rules = koszul_bracket(m.pi, a, b);
    const CovectorField by_definition = koszul_bracket_by_definition(m.pi, a, b);

    struct Row {
        MaxAbs torsion, metric, rule, definition;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const Point& p = points[idx];
        Row r;
        const LocalConnection conn(m, p);
        for (double x : conn.torsion_residual())
            r.torsion.add(x);
        for (double x : conn.metric_residual())
            r.metric.add(x);
        for (std::size_t k = 0; k < brackets.size(); ++k) {
            const Vec u = brackets[k].at(p), v = dpi[k].at(p);
            for (std::size_t l = 0; l < n; ++l)
                r.rule.add(u[l] - v[l]);
        }
        const Vec u = by_rules.at(p), v = by_definition.at(p);
        for (std::size_t l = 0; l < n; ++l)
            r.definition.add(rel(v[l], u[l]));
        return r;
    });
    Row t;
    for (const auto& r : rows) {
        t.torsion.merge(r.torsion);
        t.metric.merge(r.metric);
        t.rule.merge(r.rule);
        t.definition.merge(r.definition);
    }
    VerificationReport rep;
    const std::size_t np = points.size();
    rep.add("connection.torsion", m.name, t.torsion.value(), o.tol, np, o.seed, "D_a b - D_b a - [a,b]");
    rep.add("connection.metric", m.name, t.metric.value(), o.tol, np, o.seed, "#a(g(b,c)) - g(D_a b,c) - g(b,D_a c)");
    rep.add("koszul.coordinate_rule", m.name, t.rule.value(), kKoszulRuleTolerance, np, o.seed,
            "[dx^i,dx^j] - d(Pi^ij)");
    rep.add("koszul.definition", m.name, t.definition.value(), kKoszulDefinitionTolerance, np, o.seed,
            "coordinate rules against L_#a b - L_#b a - d(Pi(a,b)), relative");
    return rep;
}

VerificationReport curvature_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const Chart& c = m.chart;
    const std::size_t n = c.dim();
    const CovectorField a = test_covector(c, 0), b = test_covector(c, 1), g = test_covector(c, 2);
    const bool poisson = max_jacobi(m, points) <= o.tol;

    struct Row {
        MaxAbs antisymmetry, tensoriality, bianchi, size;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const Point& p = points[idx];
        const LocalConnection conn(m, p);
        Row r;
        const auto aj = a.jets(p, 2), bj = b.jets(p, 2), gj = g.jets(p, 2);
        const Vec rab = conn.curvature(aj, bj, gj), rba = conn.curvature(bj, aj, gj);
        const Vec av = values(aj), bv = values(bj), gv = values(gj);
        const auto& t = conn.curvature_tensor();
        for (double x : t)
            r.size.add(x);
        for (std::size_t l = 0; l < n; ++l) {
            r.antisymmetry.add(rel(rab[l], -rba[l]));
            double contracted = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k)
                        contracted += av[i] * bv[j] * gv[k] * t[((i * n + j) * n + k) * n + l];
            r.tensoriality.add(rel(rab[l], contracted));
        }
        // R^{ijk} + R^{jki} + R^{kij} = 0 on the coframe.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        r.bianchi.add(t[((i * n + j) * n + k) * n + l] + t[((j * n + k) * n + i) * n + l] +
                                      t[((k * n + i) * n + j) * n + l]);
        return r;
    });
    Row t;
    for (const auto& r : rows) {
        t.antisymmetry.merge(r.antisymmetry);
        t.tensoriality.merge(r.tensoriality);
        t.bianchi.merge(r.bianchi);
        t.size.merge(r.size);
    }
    VerificationReport rep;
    const std::size_t np = points.size();
    rep.add("curvature.antisymmetry", m.name, t.antisymmetry.value(), o.tol, np, o.seed,
            "R(a,b)c + R(b,a)c on non-constant covectors, relative");
    if (poisson) {
        rep.add("curvature.tensoriality", m.name, t.tensoriality.value(), o.tol, np, o.seed,
                "R(a,b)c against the contracted tensor, relative");
        rep.add("curvature.bianchi", m.name, t.bianchi.value(), o.tol, np, o.seed, "cyclic sum over the coframe");
    } else {
        rep.diagnostics.push_back({"curvature.tensoriality", m.name, t.tensoriality.value(),
                                   "bivector is not Poisson: R is not tensorial"});
        rep.diagnostics.push_back({"curvature.bianchi", m.name, t.bianchi.value(), "bivector is not Poisson"});
    }
    rep.diagnostics.push_back({"curvature.max_component", m.name, t.size.value(), ""});
    return rep;
}

VerificationReport ricci_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const std::size_t n = m.chart.dim();
    const bool poisson = max_jacobi(m, points) <= o.tol;
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        return LocalConnection(m, points[idx]).ricci_matrix();
    });
    MaxAbs sym;
    for (const auto& ric : rows)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                sym.add(rel(ric[i * n + j], ric[j * n + i]));
    VerificationReport rep;
    if (poisson)
        rep.add("ricci.symmetry", m.name, sym.value(), o.tol, points.size(), o.seed, "relative");
    else
        rep.diagnostics.push_back({"ricci.symmetry", m.name, sym.value(), "bivector is not Poisson"});
    if (!rows.empty())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                rep.diagnostics.push_back(
                    {"ricci[" + coordinate_pair(m.chart, i, j) + "]", m.name, rows[0][i * n + j], "first point"});
    return rep;
}

VerificationReport scalar_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const std::size_t n = m.chart.dim();
    struct Row {
        double s = 0.0, residual = 0.0;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const LocalConnection conn(m, points[idx]);
        const auto& t = conn.curvature_tensor();
        const auto& geo = conn.geometry();
        // S = Σ g̃_ij g̃_kl R^{ikl}_m g^{mj}
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        for (std::size_t q = 0; q < n; ++q)
                            s += geo.metric(i, j) * geo.metric(k, l) * t[((i * n + k) * n + l) * n + q] *
                                 geo.g(q, j).value();
        Row r;
        r.s = conn.scalar();
        r.residual = rel(r.s, s);
        return r;
    });
    MaxAbs res;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : rows) {
        res.add(r.residual);
        lo = std::min(lo, r.s);
        hi = std::max(hi, r.s);
    }
    VerificationReport rep;
    rep.add("scalar.trace", m.name, res.value(), o.tol, points.size(), o.seed,
            "S against the double trace of the curvature tensor, relative");
    if (!rows.empty()) {
        rep.diagnostics.push_back({"scalar", m.name, rows[0].s, "first point"});
        rep.diagnostics.push_back({"scalar.min", m.name, lo, ""});
        rep.diagnostics.push_back({"scalar.max", m.name, hi, ""});
    }
    return rep;
}

VerificationReport laplacian_suite(const PoissonManifold& m, const std::vector<FieldEntry>& functions,
                                   std::span<const Point> points, const RunOptions& o)
{
    const Chart& c = m.chart;
    const std::size_t n = c.dim();
    std::vector<FieldEntry> fs;
    for (const auto& f : functions)
        if (f.chart == c)
            fs.push_back(f);
    if (fs.empty()) {
        for (const auto& x : c.coords())
            fs.push_back({x, c, expr::parse(x, c.coords())});
        if (n >= 2) {
            const std::string t = c.coords()[0] + "*" + c.coords()[1];
            fs.push_back({t, c, expr::parse(t, c.coords())});
        }
    }
    const ScalarField combo = fs.size() >= 2 ? fs[0].expr + 2.0 * fs[1].expr : fs[0].expr;

    struct Row {
        Vec lap;
        Vec trace_residual;
        double linearity = 0.0;
    };
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const Point& p = points[idx];
        const LocalConnection conn(m, p);
        Row r;
        for (const auto& f : fs) {
            const Jet j = scalar_jet(c, f.expr, p, 2);
            const double lap = conn.laplacian(j);
            double trace = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    Vec ek(n, 0.0), el(n, 0.0);
                    ek[k] = el[l] = 1.0;
                    trace += conn.geometry().metric(k, l) * conn.hessian(j, ek, el);
                }
            r.lap.push_back(lap);
            r.trace_residual.push_back(rel(lap, -trace));
        }
        if (fs.size() >= 2)
            r.linearity = rel(conn.laplacian(scalar_jet(c, combo, p, 2)), r.lap[0] + 2.0 * r.lap[1]);
        return r;
    });
    VerificationReport rep;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        MaxAbs t;
        for (const auto& r : rows)
            t.add(r.trace_residual[k]);
        rep.add("laplacian.hessian_trace[" + fs[k].name + "]", m.name, t.value(), o.tol, points.size(), o.seed,
                "Laplacian against minus the trace of the Hessian, relative");
    }
    if (fs.size() >= 2) {
        MaxAbs t;
        for (const auto& r : rows)
            t.add(r.linearity);
        rep.add("laplacian.linearity", m.name, t.value(), o.tol, points.size(), o.seed,
                "(" + fs[0].name + ") + 2(" + fs[1].name + ")");
    }
    if (!rows.empty())
        for (std::size_t k = 0; k < fs.size(); ++k)
            rep.diagnostics.push_back({"laplacian[" + fs[k].name + "]", m.name, rows[0].lap[k], "first point"});
    return rep;
}

VerificationReport compat_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        return max_of(LocalConnection(m, points[idx]).compatibility_residual());
    });
    VerificationReport rep;
    rep.add("compat.dpi", m.name, max_of(rows), o.tol, points.size(), o.seed, "max |(D_dx^i Pi)(dx^j, dx^k)|");
    return rep;
}

VerificationReport einstein_suite(const PoissonManifold& m, std::span<const Point> points, const RunOptions& o)
{
    const EinsteinVerdict v = einstein_check(m, points, o.tol);
    std::string note = "not Einstein";
    if (v.ricci_flat)
        note = "Ricci-flat";
    else if (v.is_einstein)
        note = "Einstein";
    VerificationReport rep;
    rep.add_flag("einstein", m.name, v.is_einstein, note);
    rep.diagnostics.push_back({"einstein.lambda", m.name, v.lambda_estimate, "mean of per-point estimates"});
    rep.diagnostics.push_back({"einstein.residual", m.name, v.max_residual, "max |Ric - lambda(p) g|"});
    rep.diagnostics.push_back({"einstein.lambda_spread", m.name, v.lambda_spread, ""});
    return rep;
}

VerificationReport warp_verify_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o)
{
    VerificationReport rep = sharp_decomposition_check(w, points, o.tol, o.seed);
    rep.append(verify_decomposition(w, points, o.tol, o.seed));
    return rep;
}

VerificationReport warp_compat_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o)
{
    const CompatibilitySplit s = compatibility_split(w, points);
    const CasimirResult cas = is_casimir(w.base().pi, w.warp(), points, o.tol);
    VerificationReport rep;
    rep.add("compat.dpi", w.name(), s.product, o.tol, points.size(), o.seed, "product");
    rep.diagnostics.push_back({"compat.base", w.name(), s.base, w.base().name});
    rep.diagnostics.push_back({"compat.fiber", w.name(), s.fiber, w.fiber().name});
    rep.diagnostics.push_back(
        {"warp.casimir_residual", w.name(), cas.max_residual, cas.is_casimir ? "Casimir" : "not Casimir"});
    return rep;
}

VerificationReport warp_einstein_suite(const WarpedSpace& w, std::span<const Point> points, const RunOptions& o)
{
    VerificationReport rep = einstein_suite(w.product(), points, o);
    for (auto& c : rep.checks)
        c.target = w.name();
    for (auto& d : rep.diagnostics)
        d.target = w.name();
    rep.append(einstein_warp_conditions(w, points, o.tol));
    if (w.s1() == 1 && w.base().pi.is_zero())
        rep.append(grw_ricci_flat_check(w, points, o.tol));
    return rep;
}

} // namespace pw
