#include "pw/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pw::expr;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

double at(const std::string& text, Point p, std::vector<std::string> vars = kXY)
{
    return evaluate(parse(text, std::move(vars)), p);
}

std::vector<Point> random_points(std::size_t n, double lo, double hi, unsigned seed = 7)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({{"x", u(rng)}, {"y", u(rng)}});
    return out;
}

// Fields that are defined on x, y in [0.5, 2].
const char* kSamples[] = {
    "x^2 * sin(y)",
    "exp(x)/x",
    "sqrt(x*y + 1) - log(y)",
    "cos(x - y)^3 / (1 + x^2)",
    "-x^-2 + 2^0.5^2 * y",
    "x^1.5 * exp(-y/3)",
    "3.5e-1*x - (y - 2)*(x + 4)",
};

} // namespace

TEST_CASE("parse builds the expected trees")
{
    const ScalarField s = parse("x^2 * sin(y)", kXY);
    REQUIRE(s.node()->op == Op::Multiply);
    CHECK(s.node()->lhs->op == Op::Power);
    CHECK(s.node()->lhs->value == 2.0);
    CHECK(s.node()->rhs->op == Op::Sin);

    CHECK(at("2*x^3", {{"x", 2.0}}, {"x"}) == doctest::Approx(16.0));
    CHECK(at("x^2*y", {{"x", 2.0}, {"y", 3.0}}) == doctest::Approx(12.0));
    CHECK(at("sqrt(x)", {{"x", 4.0}}, {"x"}) == doctest::Approx(2.0));
}

TEST_CASE("operator precedence and associativity")
{
    const Point p{{"x", 2.0}, {"y", 3.0}};
    CHECK(at("-x^2", p) == doctest::Approx(-4.0));
    CHECK(at("2^3^2", p) == doctest::Approx(512.0));
    CHECK(at("x - y - 1", p) == doctest::Approx(-2.0));
    CHECK(at("12 / x / y", p) == doctest::Approx(2.0));
    CHECK(at("1 + 2 * x ^ 2", p) == doctest::Approx(9.0));
    CHECK(at("x^-1", p) == doctest::Approx(0.5));
    CHECK(at("  ( x+y )*2 ", p) == doctest::Approx(10.0));
    CHECK(at("1e1 + 2.5E-1 + .5", p) == doctest::Approx(10.75));
}

TEST_CASE("syntax errors carry positions")
{
    try {
        parse("x +", {"x"});
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 3);
        CHECK(std::string(e.what()).find("position 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("(x", {"x"}), ParseError);
    CHECK_THROWS_AS(parse("x ^ y", {"x", "y"}), ParseError);
    CHECK_THROWS_AS(parse("x $ 2", {"x"}), ParseError);
    CHECK_THROWS_AS(parse("", {"x"}), ParseError);
    CHECK_THROWS_AS(parse("x y", {"x", "y"}), ParseError);
}

TEST_CASE("unknown identifiers are named")
{
    try {
        parse("x + z", kXY);
        FAIL("expected an unknown identifier error");
    } catch (const UnknownIdentifierError& e) {
        CHECK(e.identifier() == "z");
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse("tan(x)", kXY), UnknownIdentifierError);
    CHECK_THROWS_AS(parse("sin", kXY), UnknownIdentifierError);
}

TEST_CASE("derivatives match the textbook rules")
{
    const Point p{{"x", 1.3}, {"y", -0.7}};
    const double x = 1.3, y = -0.7;
    CHECK(evaluate(differentiate(parse("x^2*y", kXY), "x"), p) == doctest::Approx(2 * x * y));
    CHECK(evaluate(differentiate(parse("sin(t)", {"t"}), "t"), {{"t", 0.4}}) == doctest::Approx(std::cos(0.4)));
    CHECK(evaluate(differentiate(parse("exp(x)/x", kXY), "x"), p) ==
          doctest::Approx(std::exp(x) / x - std::exp(x) / (x * x)));
    CHECK(evaluate(differentiate(parse("x^2*y", kXY), "y"), p) == doctest::Approx(x * x));
    CHECK(differentiate(parse("x^2", kXY), "y").is_zero());
}

TEST_CASE("domain errors are reported with the subexpression")
{
    try {
        at("log(x)", {{"x", -1.0}}, {"x"});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.subexpression() == "log(x)");
    }
    CHECK_THROWS_AS(at("sqrt(x - 3)", {{"x", 1.0}}, {"x"}), DomainError);
    CHECK_THROWS_AS(at("1/(x - 1)", {{"x", 1.0}}, {"x"}), DomainError);
    CHECK_THROWS_AS(at("x^0.5", {{"x", -2.0}}, {"x"}), DomainError);
    CHECK_THROWS_AS(at("log(0)", {}, {}), DomainError);
}

TEST_CASE("points: missing coordinates fail, extra ones are ignored")
{
    CHECK_THROWS_AS(at("x + y", {{"x", 1.0}}), MissingCoordinateError);
    CHECK(at("x", {{"x", 1.0}, {"z", 9.0}}, {"x"}) == doctest::Approx(1.0));
}

TEST_CASE("derivatives agree with central differences")
{
    const double h = 1e-5;
    for (const char* text : kSamples) {
        const ScalarField s = parse(text, kXY);
        for (const char* v : {"x", "y"}) {
            const ScalarField ds = differentiate(s, v);
            for (const auto& p : random_points(100, 0.5, 2.0)) {
                Point hi = p, lo = p;
                hi[v] += h;
                lo[v] -= h;
                const double fd = (evaluate(s, hi) - evaluate(s, lo)) / (2 * h);
                const double exact = evaluate(ds, p);
                CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST_CASE("differentiation is linear")
{
    const ScalarField s = parse("x^2 * sin(y)", kXY);
    const ScalarField t = parse("exp(x*y) / (1 + y^2)", kXY);
    const double a = 2.5, b = -0.75;
    const ScalarField lhs = differentiate(a * s + b * t, "x");
    const ScalarField ds = differentiate(s, "x"), dt = differentiate(t, "x");
    for (const auto& p : random_points(100, -2.0, 2.0)) {
        const double l = evaluate(lhs, p);
        const double r = a * evaluate(ds, p) + b * evaluate(dt, p);
        CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(r)));
    }
}

TEST_CASE("print then parse evaluates identically")
{
    for (const char* text : kSamples) {
        const ScalarField s = parse(text, kXY);
        for (const ScalarField& e : {s, differentiate(s, "x"), differentiate(differentiate(s, "y"), "x")}) {
            const std::string printed = to_string(e);
            CAPTURE(printed);
            const ScalarField back = parse(printed, kXY);
            for (const auto& p : random_points(100, 0.5, 2.0)) {
                const double a = evaluate(e, p), b = evaluate(back, p);
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }
    CHECK(evaluate(parse(to_string(ScalarField::constant(-3.0, {})), {}), {}) == -3.0);
}

TEST_CASE("compiled evaluation matches tree evaluation")
{
    for (const char* text : kSamples) {
        const ScalarField s = parse(text, kXY);
        const CompiledField c(s, kXY);
        for (const auto& p : random_points(50, 0.5, 2.0)) {
            const double x[] = {p.at("x"), p.at("y")};
            CHECK(c(x) == evaluate(s, p));
        }
    }
    const CompiledField lg(parse("log(x)", {"x"}), {"x"});
    const double bad[] = {-1.0};
    CHECK_THROWS_AS(lg(bad), DomainError);
}

TEST_CASE("fields declare the coordinates they may use")
{
    const ScalarField s = parse("x + 1", kXY);
    CHECK(s.references("x"));
    CHECK_FALSE(s.references("y"));
    CHECK_THROWS(s.with_vars({"y"}));
    CHECK_NOTHROW(s.with_vars({"x", "z"}));
    CHECK_THROWS(parse("x", {"x", "x"}));
}
