#include "support.hpp"

#include "pw/parallel.hpp"

using namespace pwtest;

namespace {

void check_vec(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12)
{
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(got[i] - want[i]) <= tol);
}

PoissonManifold broken_r3()
{
    Chart c("r3", {"x1", "x2", "x3"});
    return {"broken_r3", bivector(c, {{0, 1, "x3"}, {1, 2, "x2"}}), Cometric::euclidean(c)};
}

} // namespace

TEST_CASE("charts")
{
    CHECK_THROWS_AS(Chart("bad", {}), InvalidArgumentError);
    CHECK_THROWS_AS(Chart("bad", {"x", "x"}), InvalidArgumentError);
    const Chart c("r2", {"x", "y"});
    CHECK(c.index_of("y") == 1);
    CHECK_THROWS_AS(c.index_of("z"), InvalidArgumentError);
    CHECK(c.coordinates({{"y", 2.0}, {"x", 1.0}, {"q", 5.0}}) == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(c.coordinates({{"x", 1.0}}), expr::MissingCoordinateError);
}

TEST_CASE("bivector and cometric storage")
{
    const Chart c("r2", {"x", "y"});
    const BivectorField pi = bivector(c, {{0, 1, "x"}});
    const Point p{{"x", 0.7}, {"y", 1.0}};
    CHECK(expr::evaluate(pi.entry(0, 1), p) == doctest::Approx(0.7));
    CHECK(expr::evaluate(pi.entry(1, 0), p) == doctest::Approx(-0.7));
    CHECK(pi.entry(1, 1).is_zero());
    CHECK_THROWS_AS(bivector(c, {{1, 0, "x"}}), InvalidArgumentError);
    CHECK_THROWS_AS(bivector(c, {{0, 0, "x"}}), InvalidArgumentError);
    CHECK_THROWS_AS(bivector(c, {{0, 2, "x"}}), InvalidArgumentError);
    CHECK_THROWS_AS(cometric(c, {{1, 0, "x"}}), InvalidArgumentError);
    CHECK_THROWS_AS(PoissonManifold("m", pi, Cometric::euclidean(Chart("r2", {"u", "v"}))), ChartMismatchError);
}

TEST_CASE("sharp")
{
    const auto m = flat2d();
    const VectorField s = sharp(m.pi, CovectorField::basis(m.chart, 0));
    check_vec(s.at({{"x", 0.3}, {"y", 0.1}}), {0.0, 1.0});

    const Chart& c = m.chart;
    const VectorField z = sharp(BivectorField(c), covector(c, {"x", "y^2"}));
    check_vec(z.at({{"x", 0.3}, {"y", 0.1}}), {0.0, 0.0});

    const auto so3 = so3_star();
    const VectorField t = sharp(so3.pi, CovectorField::basis(so3.chart, 0));
    check_vec(t.at({{"x1", 0.0}, {"x2", 0.0}, {"x3", 1.0}}), {0.0, 1.0, 0.0});

    // β(♯α) = Π(α, β)
    const CovectorField a = covector(so3.chart, {"x1*x2", "sin(x3)", "1"});
    const CovectorField b = covector(so3.chart, {"x3", "x1 - x2", "exp(x2)"});
    const VectorField sa = sharp(so3.pi, a);
    const ScalarField pab = pairing(so3.pi, a, b);
    for (const auto& p : points(so3.chart)) {
        const auto x = sa.at(p), bv = b.at(p);
        const double lhs = x[0] * bv[0] + x[1] * bv[1] + x[2] * bv[2];
        CHECK(std::abs(lhs - expr::evaluate(pab, p)) <= 1e-12);
    }
    CHECK_THROWS_AS(sharp(m.pi, CovectorField::basis(so3.chart, 0)), ChartMismatchError);
}

TEST_CASE("J endomorphism")
{
    const auto m = flat2d();
    const Point p{{"x", 0.2}, {"y", -1.0}};
    check_vec(j_endomorphism(m.pi, m.g, CovectorField::basis(m.chart, 0)).at(p), {0.0, 1.0});
    check_vec(j_endomorphism(m.pi, m.g, CovectorField::basis(m.chart, 1)).at(p), {-1.0, 0.0});
    check_vec(j_endomorphism(BivectorField(m.chart), m.g, covector(m.chart, {"x", "y"})).at(p), {0.0, 0.0});

    // g(Jα, β) + g(α, Jβ) = 0 on a non-constant cometric.
    const Chart c("r3", {"x1", "x2", "x3"});
    const auto so3 = so3_star();
    const Cometric g = cometric(c, {{0, 0, "2 + sin(x1)"}, {0, 1, "0.3*x3"}, {1, 1, "1 + x2^2"}, {2, 2, "-1"}});
    const CovectorField a = covector(c, {"x1", "1", "x2*x3"});
    const CovectorField b = covector(c, {"cos(x2)", "x3", "-2"});
    const CovectorField ja = j_endomorphism(so3.pi, g, a), jb = j_endomorphism(so3.pi, g, b);
    const PoissonManifold mg("so3_g", so3.pi, g);
    for (const auto& p3 : points(c)) {
        const LocalGeometry local(mg, p3, 0);
        const auto A = a.jets(p3, 0), B = b.jets(p3, 0), JA = ja.jets(p3, 0), JB = jb.jets(p3, 0);
        const double s = local.g_pairing(JA, B).value() + local.g_pairing(A, JB).value();
        CHECK(std::abs(s) <= 1e-12);
        CHECK(std::abs(local.g_pairing(JA, B).value() - local.pi_pairing(A, B).value()) <= 1e-12);
    }

    const Cometric degenerate = cometric(m.chart, {{0, 0, "1"}});
    CHECK_THROWS_AS(j_endomorphism(m.pi, degenerate, CovectorField::basis(m.chart, 0)).at(p), SingularCometricError);
}

TEST_CASE("jet solves carry derivatives")
{
    // A = [[1 + x^2, y], [y, 2]] against b = (sin x, x y); compare to finite differences.
    const Chart c("r2", {"x", "y"});
    const Cometric g = cometric(c, {{0, 0, "1 + x^2"}, {0, 1, "y"}, {1, 1, "2"}});
    const SmoothField b0(c, sf(c, "sin(x)")), b1(c, sf(c, "x*y"));
    auto solve = [&](std::vector<double> x, int order) {
        const JetLinearSolver s(g.jets(x, order), 2);
        return s.solve({b0.jet(x, order), b1.jet(x, order)});
    };
    const std::vector<double> x0 = {0.4, -0.3};
    const auto sol = solve(x0, 2);
    const double h = 1e-4;
    for (std::size_t m = 0; m < 2; ++m) {
        auto xp = x0, xm = x0;
        xp[m] += h;
        xm[m] -= h;
        const auto sp = solve(xp, 1), sm = solve(xm, 1);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(sol[i].d(m) == doctest::Approx((sp[i].value() - sm[i].value()) / (2 * h)).epsilon(1e-7));
            for (std::size_t l = 0; l < 2; ++l)
                CHECK(sol[i].d2(m, l) == doctest::Approx((sp[i].d(l) - sm[i].d(l)) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("Koszul bracket examples")
{
    const auto flat = flat2d();
    const Chart& c = flat.chart;
    const Point p{{"x", 0.8}, {"y", -0.4}};
    const CovectorField dx = CovectorField::basis(c, 0), dy = CovectorField::basis(c, 1);
    check_vec(koszul_bracket(flat.pi, dx, dy).at(p), {0.0, 0.0});
    check_vec(koszul_bracket(poisson_x().pi, dx, dy).at(p), {1.0, 0.0});
    check_vec(koszul_bracket(flat.pi, covector(c, {"x", "0"}), dy).at(p), {1.0, 0.0});
}

TEST_CASE("Koszul bracket: coordinate rules, definition, antisymmetry")
{
    for (const auto& m : {flat2d(), poisson_x(), so3_star(), broken_r3()}) {
        CAPTURE(m.name);
        const Chart& c = m.chart;
        const std::size_t n = c.dim();
        std::vector<std::string> ac, bc;
        for (std::size_t i = 0; i < n; ++i) {
            ac.push_back(c.coords()[i] + "^2 - " + c.coords()[(i + 1) % n]);
            bc.push_back("sin(" + c.coords()[(i + 1) % n] + ") * " + c.coords()[i]);
        }
        const CovectorField a = covector(c, ac), b = covector(c, bc);
        const CovectorField ab = koszul_bracket(m.pi, a, b), ba = koszul_bracket(m.pi, b, a);
        const CovectorField def = koszul_bracket_by_definition(m.pi, a, b);
        for (const auto& p : points(c)) {
            const auto x = ab.at(p), y = ba.at(p), z = def.at(p);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(x[k] + y[k]) <= 1e-12);
                CHECK(std::abs(x[k] - z[k]) <= 1e-10 * std::max(1.0, std::abs(z[k])));
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const auto v = koszul_bracket(m.pi, CovectorField::basis(c, i), CovectorField::basis(c, j)).at(p);
                    const auto dpi = differential(c, m.pi.entry(i, j)).at(p);
                    for (std::size_t k = 0; k < n; ++k)
                        CHECK(std::abs(v[k] - dpi[k]) <= 1e-12);
                }
        }
    }
}

TEST_CASE("pointwise bracket matches the symbolic bracket")
{
    const auto m = so3_star();
    const Chart& c = m.chart;
    const CovectorField a = covector(c, {"x1*x2", "exp(x3)", "x2"});
    const CovectorField b = covector(c, {"1", "x1^2", "sin(x2)"});
    const CovectorField sym = koszul_bracket(m.pi, a, b);
    const CovectorField ja = CovectorField::from_procedure(c, 2, [a](const Point& p, int o) { return a.jets(p, o); });
    const CovectorField num = koszul_bracket(m.pi, ja, b);
    CHECK_FALSE(num.is_symbolic());
    for (const auto& p : points(c, 20)) {
        const auto s = sym.jets(p, 1), q = num.jets(p, 1);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(s[k].value() - q[k].value()) <= 1e-12);
            for (std::size_t l = 0; l < 3; ++l)
                CHECK(std::abs(s[k].d(l) - q[k].d(l)) <= 1e-11);
        }
    }
}

TEST_CASE("sharp is a bracket homomorphism on Poisson examples")
{
    for (const auto& m : {flat2d(), poisson_x(), so3_star()}) {
        CAPTURE(m.name);
        const Chart& c = m.chart;
        const std::size_t n = c.dim();
        std::vector<std::string> ac, bc;
        for (std::size_t i = 0; i < n; ++i) {
            ac.push_back(c.coords()[i] + " * " + c.coords()[(i + 1) % n]);
            bc.push_back("cos(" + c.coords()[i] + ") + " + c.coords()[(i + n - 1) % n] + "^2");
        }
        const CovectorField a = covector(c, ac), b = covector(c, bc);
        const VectorField lhs = sharp(m.pi, koszul_bracket(m.pi, a, b));
        const VectorField rhs = commutator(sharp(m.pi, a), sharp(m.pi, b));
        for (const auto& p : points(c)) {
            const auto l = lhs.at(p), r = rhs.at(p);
            for (std::size_t k = 0; k < n; ++k)
                CHECK(std::abs(l[k] - r[k]) <= 1e-8);
        }
    }
}

TEST_CASE("Jacobi residual")
{
    for (const auto& m : {flat2d(), poisson_x(), so3_star()})
        for (const auto& p : points(m.chart))
            CHECK(max_abs(jacobi_residual(m.pi, p)) <= 1e-12);

    const auto b = broken_r3();
    double worst = 0.0;
    for (const auto& p : points(b.chart)) {
        const auto j = jacobi_residual(b.pi, p);
        const double x3 = p.at("x3");
        CHECK(j[(0 * 3 + 1) * 3 + 2] == doctest::Approx(-x3));
        worst = std::max(worst, max_abs(j));
        // total antisymmetry
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l) {
                    const double v = j[(i * 3 + k) * 3 + l];
                    CHECK(std::abs(v + j[(k * 3 + i) * 3 + l]) <= 1e-12);
                    CHECK(std::abs(v + j[(i * 3 + l) * 3 + k]) <= 1e-12);
                }
    }
    CHECK(worst >= 0.5);
}

TEST_CASE("Casimir test")
{
    const Chart line("t", {"t"});
    const auto pts = points(line);
    CHECK(is_casimir(BivectorField(line), sf(line, "sin(t) + 2"), pts, 1e-9).is_casimir);

    const auto so3 = so3_star();
    const auto r = is_casimir(so3.pi, sf(so3.chart, "x1^2 + x2^2 + x3^2"), points(so3.chart), 1e-9);
    CHECK(r.is_casimir);
    CHECK(r.max_residual <= 1e-12);

    const auto flat = flat2d();
    const ScalarField ex = sf(flat.chart, "exp(x)");
    CHECK_FALSE(is_casimir(flat.pi, ex, points(flat.chart), 1e-9).is_casimir);
    const Point p{{"x", 0.5}, {"y", 0.0}};
    check_vec(sharp(flat.pi, differential(flat.chart, ex)).at(p), {0.0, std::exp(0.5)});
}

TEST_CASE("sampling is seeded and honours the avoid list")
{
    const auto m = poisson_x();
    const auto spec = avoid_small(m.chart, "x");
    const auto a = points(m.chart, 100, 42, spec), b = points(m.chart, 100, 42, spec);
    CHECK(a == b);
    CHECK(a != points(m.chart, 100, 7, spec));
    for (const auto& p : a) {
        CHECK(std::abs(p.at("x")) >= 0.1);
        CHECK(std::abs(p.at("y")) <= 2.0);
    }
    SamplingSpec impossible;
    impossible.avoid.push_back({sf(m.chart, "1"), 2.0});
    CHECK_THROWS_AS(points(m.chart, 5, 42, impossible), InvalidArgumentError);
}

TEST_CASE("parallel map keeps index order and rethrows the first failure")
{
    const auto v = parallel_map(1000, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(v[i] == i * i);
    CHECK_THROWS_WITH(parallel_map(100,
                                   [](std::size_t i) -> int {
                                       if (i == 17 || i == 60)
                                           throw std::runtime_error("bad " + std::to_string(i));
                                       return 0;
                                   }),
                      "bad 17");
}
