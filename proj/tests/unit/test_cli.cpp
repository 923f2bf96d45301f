#include "support.hpp"

#include "pw/cli.hpp"
#include "pw/manifest.hpp"

#include <json.hpp>

#include <sstream>

using namespace pwtest;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(PW_FIXTURES_DIR) + "/" + name; }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run pw_run(cli::Options o)
{
    std::ostringstream out, err;
    const int code = cli::run(o, out, err);
    return {code, out.str(), err.str()};
}

cli::Options opts(std::string command, std::string manifest = "")
{
    cli::Options o;
    o.command = std::move(command);
    o.manifest = manifest.empty() ? "" : fixture(manifest);
    o.format = cli::Format::Json;
    return o;
}

std::string expect_error(std::string_view text)
{
    try {
        parse_manifest(text);
    } catch (const ManifestError& e) {
        return e.kind() + " @ " + e.where();
    }
    return "no error";
}

const char* kBase = R"({
  "charts": [{"name": "R2", "coords": ["x", "y"]}, {"name": "Z", "coords": ["z"]}],
  "manifolds": [
    {"name": "b", "chart": "R2", "bivector": [{"i": 0, "j": 1, "expr": "1"}],
     "cometric": [{"i": 0, "j": 0, "expr": "1"}, {"i": "y", "j": "y", "expr": "1"}]},
    {"name": "f", "chart": "Z", "cometric": [{"i": 0, "j": 0, "expr": "1"}]}
  ],
  "warped_products": [{"name": "w", "base": "b", "fiber": "f", "warp": "WARP"}]
})";

std::string with_warp(const std::string& warp)
{
    std::string s = kBase;
    s.replace(s.find("WARP"), 4, warp);
    return s;
}

} // namespace

TEST_CASE("shipped fixtures load")
{
    for (const char* f : {"flat2d.json", "poisson_x.json", "so3_star.json", "grw.json", "noncasimir_warp.json",
                          "nonpoisson_compat.json"}) {
        CAPTURE(f);
        CHECK_NOTHROW(load_manifest(fixture(f)));
    }
    const Manifest m = load_manifest(fixture("grw.json"));
    REQUIRE(m.find_warped("grw") != nullptr);
    const WarpedSpace& w = m.find_warped("grw")->space;
    CHECK(w.chart().coords() == std::vector<std::string>{"t", "z1", "z2"});
    CHECK(w.s1() == 1);
    CHECK(w.base().pi.is_zero());
    CHECK(m.find_task("warp-verify")->params.at("seed") == 7.0);
}

TEST_CASE("manifest validation errors")
{
    CHECK(parse_manifest(with_warp("exp(x)")).warped.size() == 1);
    // Bivector entries must have i < j.
    std::string bad = kBase;
    bad.replace(bad.find(R"({"i": 0, "j": 1, "expr": "1"})"), 29, R"({"i": 1, "j": 0, "expr": "1"})");
    CHECK(expect_error(bad) == "invalid_manifest @ manifolds[0].bivector[0]");
    // Warp using a fiber coordinate.
    CHECK(expect_error(with_warp("1 + z^2")) == "coordinate_mismatch @ warped_products[0]");
    // Unknown identifiers and syntax errors carry the JSON path and a position.
    CHECK(expect_error(with_warp("exp(q)")) == "coordinate_mismatch @ warped_products[0].warp");
    try {
        parse_manifest(with_warp("1 + * x"));
        FAIL("expected a parse error");
    } catch (const ManifestError& e) {
        CHECK(e.kind() == "parse_error");
        REQUIRE(e.position().has_value());
        CHECK(*e.position() == 4);
    }
    std::string unresolved = with_warp("1");
    unresolved.replace(unresolved.find(R"("fiber": "f")"), 12, R"("fiber": "g")");
    CHECK(expect_error(unresolved) == "unresolved_reference @ warped_products[0].fiber");
    CHECK(expect_error(R"({"charts": [{"name": "A", "coords": ["x"]}], "manifolds": [{"name": "m", "chart": "B", "cometric": []}]})") ==
          "unresolved_reference @ manifolds[0].chart");
    CHECK(expect_error(R"({"charts": [{"name": "A", "coords": ["x", "y"]}], "manifolds": [{"name": "m", "chart": "A",
          "cometric": [{"i": 0, "j": 0, "expr": "1"}, {"i": 0, "j": 0, "expr": "2"}]}]})") ==
          "invalid_manifest @ manifolds[0].cometric[1]");
    CHECK(expect_error(R"({"charts": [{"name": "A", "coords": ["x"]}], "manifolds": [{"name": "m", "chart": "A",
          "cometric": [{"i": "y", "j": 0, "expr": "1"}]}]})") == "coordinate_mismatch @ manifolds[0].cometric[0].i");
    CHECK(expect_error("{\"charts\": [") .rfind("json_parse_error", 0) == 0);
}

TEST_CASE("solve-warp and solve-scalar print the solution")
{
    auto o = opts("solve-warp");
    o.lambda = 4;
    o.lambda_hat = 1;
    const Run r = pw_run(o);
    CHECK(r.code == cli::kExitPass);
    const json j = json::parse(r.out);
    CHECK(j["solution"]["kind"] == "constant-f");
    CHECK(j["solution"]["f"] == 2.0);

    auto s = opts("solve-scalar");
    s.sb = 3;
    s.mu = -2;
    s.mu1 = 1;
    s.s2 = 2;
    CHECK(json::parse(pw_run(s).out)["solution"]["f"] == 1.0);

    s.mu = 0;
    const Run e = pw_run(s);
    CHECK(e.code == cli::kExitError);
    CHECK(json::parse(e.out)["error"]["kind"] == "invalid_argument");

    auto missing = opts("solve-warp");
    CHECK(pw_run(missing).code == cli::kExitError);

    // Constants estimated from the factors of a manifest.
    auto from_manifest = opts("solve-warp", "grw.json");
    from_manifest.target = "grw";
    const json g = json::parse(pw_run(from_manifest).out);
    CHECK(g["solution"]["kind"] == "any-positive-constant");
}

TEST_CASE("warp-verify on the GRW fixture passes")
{
    auto o = opts("warp-verify", "grw.json");
    o.points = 100;
    o.seed = 7;
    o.tol = 1e-9;
    const Run r = pw_run(o);
    CHECK(r.code == cli::kExitPass);
    const json j = json::parse(r.out);
    CHECK(j["summary"]["failed"] == 0);
    CHECK(j["seed"] == 7);
    CHECK(j["checks"].size() >= 40);
}

TEST_CASE("compat on the incompatible fixture fails with the residual")
{
    const Run r = pw_run(opts("compat", "nonpoisson_compat.json"));
    CHECK(r.code == cli::kExitFail);
    const json j = json::parse(r.out);
    bool seen = false;
    for (const auto& c : j["checks"])
        if (c["target"] == "poisson_x") {
            seen = true;
            CHECK_FALSE(c["passed"].get<bool>());
            CHECK(c["max_residual"].get<double>() >= 0.05);
        }
    CHECK(seen);
}

TEST_CASE("exit code follows the checks")
{
    for (const auto& [cmd, file] : std::vector<std::pair<std::string, std::string>>{
             {"connection", "so3_star.json"},
             {"einstein", "grw.json"},
             {"compat", "grw.json"},
             {"ricci", "poisson_x.json"},
             {"curvature", "nonpoisson_compat.json"},
             {"laplacian", "flat2d.json"},
             {"scalar", "noncasimir_warp.json"},
             {"validate", "nonpoisson_compat.json"}}) {
        CAPTURE(cmd);
        CAPTURE(file);
        auto o = opts(cmd, file);
        o.points = 20;
        const Run r = pw_run(o);
        REQUIRE(r.code != cli::kExitError);
        const json j = json::parse(r.out);
        CHECK((r.code == cli::kExitPass) == (j["summary"]["failed"] == 0));
    }
}

TEST_CASE("reports are byte-identical for the same seed")
{
    auto o = opts("warp-verify", "noncasimir_warp.json");
    o.points = 30;
    o.seed = 11;
    const Run a = pw_run(o), b = pw_run(o);
    CHECK(a.out == b.out);
    o.format = cli::Format::Text;
    CHECK(pw_run(o).out == pw_run(o).out);
    o.seed = 12;
    o.format = cli::Format::Json;
    CHECK(pw_run(o).out != a.out);
}

TEST_CASE("errors become structured records")
{
    auto o = opts("connection", "does_not_exist.json");
    Run r = pw_run(o);
    CHECK(r.code == cli::kExitError);
    CHECK(json::parse(r.out)["error"]["kind"] == "io_error");

    o = opts("frobnicate", "grw.json");
    CHECK(pw_run(o).code == cli::kExitError);

    o = opts("einstein", "grw.json");
    o.target = "nope";
    r = pw_run(o);
    CHECK(r.code == cli::kExitError);
    CHECK(json::parse(r.out)["error"]["kind"] == "unresolved_reference");

    o = opts("warp-verify", "flat2d.json");
    o.format = cli::Format::Text;
    r = pw_run(o);
    CHECK(r.code == cli::kExitError);
    CHECK(r.out.empty());
    CHECK(r.err.find("error [invalid_argument]") != std::string::npos);
}
