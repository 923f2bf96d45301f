#include "support.hpp"

#include "pw/warped.hpp"

using namespace pwtest;

namespace {

PoissonManifold interval()
{
    Chart c("I", {"t"});
    return {"interval", BivectorField(c), cometric(c, {{0, 0, "-1"}})};
}

PoissonManifold flat_fiber(std::vector<std::string> coords, std::string pi = "")
{
    Chart c("F", std::move(coords));
    if (pi.empty() || c.dim() < 2)
        return {"flat", BivectorField(c), Cometric::euclidean(c)};
    return {"flat", bivector(c, {{0, 1, pi}}), Cometric::euclidean(c)};
}

PoissonManifold poisson_x_fiber()
{
    Chart c("F", {"z1", "z2"});
    return {"poisson_x_fiber", bivector(c, {{0, 1, "z1"}}), Cometric::euclidean(c)};
}

WarpedSpace grw(double amp = 1.0)
{
    const auto b = interval();
    return {"grw", b, flat_fiber({"z1", "z2"}, "1"), sf(b.chart, "2 + " + std::to_string(amp) + "*sin(t)")};
}

WarpedSpace noncasimir(std::size_t s2)
{
    const auto b = flat2d();
    if (s2 == 1)
        return {"noncasimir", b, flat_fiber({"z"}), sf(b.chart, "exp(x)")};
    return {"noncasimir2", b, poisson_x_fiber(), sf(b.chart, "exp(x)")};
}

std::vector<Point> product_points(const WarpedSpace& w, std::size_t n = 30, std::string avoid = "")
{
    SamplingSpec s;
    if (!avoid.empty())
        s.avoid.push_back({sf(w.chart(), avoid), 0.1});
    return sample_points(w.chart(), s, n, 42);
}

void require_all_pass(const VerificationReport& r)
{
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.max_residual);
        CHECK(c.passed);
    }
}

} // namespace

TEST_CASE("build: product tensors and errors")
{
    const WarpedSpace w = grw();
    CHECK(w.chart().coords() == std::vector<std::string>{"t", "z1", "z2"});
    const Point p{{"t", 0.3}, {"z1", 1.0}, {"z2", -1.0}};
    const double f = 2 + std::sin(0.3);
    CHECK(expr::evaluate(w.product().g.entry(1, 1), p) == doctest::Approx(1.0 / (f * f)));
    CHECK(expr::evaluate(w.product().g.entry(0, 0), p) == doctest::Approx(-1.0));
    CHECK(w.product().g.entry(0, 1).is_zero());
    CHECK(expr::evaluate(w.product().pi.entry(1, 2), p) == doctest::Approx(1.0));
    CHECK(w.product().pi.entry(0, 1).is_zero());

    const auto b = interval();
    CHECK_THROWS_AS(WarpedSpace("clash", b, interval(), sf(b.chart, "1")), InvalidArgumentError);
    const Chart both("both", {"t", "z1"});
    CHECK_THROWS_AS(WarpedSpace("fiberwarp", b, flat_fiber({"z1", "z2"}), sf(both, "1 + z1^2")), InvalidArgumentError);
    const std::vector<Point> pts = {p};
    CHECK_THROWS_AS(build_warped("neg", b, flat_fiber({"z1"}), sf(b.chart, "-1"), pts), InvalidArgumentError);
    CHECK_NOTHROW(build_warped("pos", b, flat_fiber({"z1"}), sf(b.chart, "1"), pts));

    // Lifts are zero padding.
    CHECK(w.lift_h(std::vector<double>{2.0}) == std::vector<double>{2.0, 0.0, 0.0});
    CHECK(w.lift_v(std::vector<double>{1.0, 3.0}) == std::vector<double>{0.0, 1.0, 3.0});
    const auto lifted = w.vertical_lift(CovectorField::basis(w.fiber().chart, 1)).at(p);
    CHECK(lifted == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("sharp map and bracket split over the factors")
{
    for (const auto& w : {grw(), noncasimir(1), noncasimir(2)}) {
        CAPTURE(w.name());
        require_all_pass(sharp_decomposition_check(w, product_points(w, 20, w.s2() == 2 ? "z1" : ""), 1e-12));
    }
    const WarpedSpace w = noncasimir(1);
    const LocalGeometry g(w.product(), {{"x", 0.1}, {"y", 0.2}, {"z", 0.3}}, 2);
    ComponentJets dx(3, Jet(3, 1)), dz(3, Jet(3, 1));
    dx[0].set_value(1.0);
    dz[2].set_value(1.0);
    CHECK(values(g.sharp(dx)) == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(max_abs(values(g.bracket(dx, dz))) == 0.0);
}

TEST_CASE("oracle spot values on the non-Casimir example")
{
    const WarpedSpace w = noncasimir(1);
    const double x = 0.4;
    const WarpedOracle o(w, {{"x", x}, {"y", -0.3}, {"z", 1.1}});
    const double e = std::exp(x);
    CHECK(o.j1df()[0] == doctest::Approx(0.0));
    CHECK(o.j1df()[1] == doctest::Approx(e));
    const std::vector<double> dy = {0.0, 1.0}, dxb = {1.0, 0.0}, dz = {1.0};
    auto near = [](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i] == doctest::Approx(b[i]));
    };
    near(o.connection_hv(dy, dz), {0.0, 0.0, 1.0});
    near(o.connection_vv(dz, dz), {0.0, -std::exp(-2 * x), 0.0});
    near(o.curvature_hv_v(dy, dz, dz), {0.0, -std::exp(-2 * x), 0.0});
    CHECK(o.ricci_hh(dy, dy) == doctest::Approx(-1.0));
    CHECK(o.ricci_hh(dxb, dxb) == doctest::Approx(0.0));
    CHECK(o.ricci_vv(dz, dz) == doctest::Approx(-std::exp(-2 * x)));
    CHECK(o.scalar() == doctest::Approx(-2.0));
    CHECK(max_abs(o.curvature_vv_h(dz, dz, dy)) == 0.0);
    CHECK(o.ricci_hv(dy, dz) == 0.0);
}

TEST_CASE("non-Casimir warp over a flat plane fiber: brute-force values")
{
    const auto b = flat2d();
    const WarpedSpace w("noncasimir_flat2", b, flat_fiber({"z1", "z2"}), sf(b.chart, "exp(x)"));
    const double x = -0.6;
    const Point p{{"x", x}, {"y", 0.5}, {"z1", 0.8}, {"z2", 1.2}};
    const LocalConnection c(w.product(), p);
    const std::vector<double> dy = {0, 1, 0, 0}, dz1 = {0, 0, 1, 0};
    CHECK(c.ricci(dy, dy) == doctest::Approx(-2.0));
    CHECK(c.ricci(dz1, dz1) == doctest::Approx(-2.0 * std::exp(-2 * x)));
    CHECK(c.scalar() == doctest::Approx(-6.0));

    // With the Π^{z1 z2} = z1 fiber the fiber curvature adds Ric_F = -1, S_F = -2.
    const LocalConnection c2(noncasimir(2).product(), p);
    CHECK(c2.ricci(dz1, dz1) == doctest::Approx(-1.0 - 2.0 * std::exp(-2 * x)));
    CHECK(c2.scalar() == doctest::Approx(-6.0 - 2.0 * std::exp(2 * x)));
}

TEST_CASE("decomposition matches the product chart")
{
    for (const auto& [w, avoid] : std::vector<std::pair<WarpedSpace, std::string>>{
             {grw(), ""}, {grw(0.5), ""}, {noncasimir(1), ""}, {noncasimir(2), "z1"}}) {
        CAPTURE(w.name());
        const auto r = verify_decomposition(w, product_points(w, 30, avoid), 1e-8);
        require_all_pass(r);
        const bool casimir = w.base().pi.is_zero();
        CHECK((r.find("casimir.scalar") != nullptr) == casimir);
    }
}

TEST_CASE("GRW with a curved fiber")
{
    const auto b = interval();
    const WarpedSpace w("grw_poisson_x", b, poisson_x_fiber(), sf(b.chart, "2 + sin(t)/2"));
    for (const auto& p : product_points(w, 20, "z1")) {
        const LocalConnection c(w.product(), p);
        const double f = 2 + std::sin(p.at("t")) / 2;
        CHECK(c.ricci(std::vector<double>{0, 1, 0}, std::vector<double>{0, 1, 0}) == doctest::Approx(-1.0));
        CHECK(c.scalar() == doctest::Approx(-2 * f * f));
    }
    require_all_pass(verify_decomposition(w, product_points(w, 30, "z1"), 1e-9));
}

TEST_CASE("compatibility of the product follows the factors when f is Casimir")
{
    const auto b = interval();
    const WarpedSpace ok("ok", b, flat_fiber({"z1", "z2"}, "1"), sf(b.chart, "2 + sin(t)"));
    const auto s_ok = compatibility_split(ok, product_points(ok));
    CHECK(s_ok.product <= 1e-9);
    CHECK(s_ok.base <= 1e-9);
    CHECK(s_ok.fiber <= 1e-9);

    // Incompatible base (DΠ ≠ 0) with a constant, hence Casimir, warp.
    const auto px = poisson_x();
    const WarpedSpace bad("bad", px, flat_fiber({"z1", "z2"}, "1"), sf(px.chart, "1.5"));
    const auto s_bad = compatibility_split(bad, product_points(bad, 30, "x"));
    CHECK(s_bad.base >= 0.05);
    CHECK(s_bad.product >= 0.05);
}

TEST_CASE("scaling the fiber metric by c² and f by 1/c leaves the vertical block unchanged")
{
    const auto b = interval();
    Chart fc("F", {"z1", "z2"});
    const double c = 2.0; // exact in decimal, since the fields are built from text
    const WarpedSpace w1("w1", b, {"F", BivectorField(fc), Cometric::euclidean(fc)}, sf(b.chart, "2 + sin(t)"));
    // Metric times c² is cometric times 1/c².
    const std::string c2 = std::to_string(1.0 / (c * c));
    const WarpedSpace w2("w2", b, {"F", BivectorField(fc), cometric(fc, {{0, 0, c2}, {1, 1, c2}})},
                         sf(b.chart, "(2 + sin(t))/" + std::to_string(c)));
    for (const auto& p : product_points(w1, 50))
        for (std::size_t i = 1; i < 3; ++i)
            for (std::size_t j = i; j < 3; ++j) {
                const double a = expr::evaluate(w1.product().g.entry(i, j), p);
                const double q = expr::evaluate(w2.product().g.entry(i, j), p);
                CHECK(std::abs(a - q) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
}
