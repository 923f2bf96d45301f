#include "pw/cli.hpp"

#include "pw/suites.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

namespace pw::cli {

using nlohmann::ordered_json;

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = {"validate", "connection", "curvature",  "ricci",
                                                   "scalar",   "laplacian",  "compat",     "warp-verify",
                                                   "einstein", "solve-warp", "solve-scalar"};
    return names;
}

namespace {

struct Result {
    VerificationReport report;
    std::optional<WarpSolution> solution;
    RunOptions run;
};

RunOptions resolve(const Options& o, const Manifest* m, std::string& target)
{
    RunOptions r;
    target = o.target;
    if (m)
        if (const TaskEntry* t = m->find_task(o.command)) {
            if (target.empty())
                target = t->target;
            if (auto it = t->params.find("points"); it != t->params.end())
                r.points = static_cast<std::size_t>(it->second);
            if (auto it = t->params.find("seed"); it != t->params.end())
                r.seed = static_cast<std::uint64_t>(it->second);
            if (auto it = t->params.find("tol"); it != t->params.end())
                r.tol = it->second;
        }
    if (o.points)
        r.points = *o.points;
    if (o.seed)
        r.seed = *o.seed;
    if (o.tol)
        r.tol = *o.tol;
    if (r.points == 0)
        throw InvalidArgumentError("--points must be positive");
    if (!(r.tol >= 0.0))
        throw InvalidArgumentError("--tol must be nonnegative");
    return r;
}

std::vector<Point> manifold_points(const ManifoldEntry& e, const RunOptions& r)
{
    return sample_points(e.manifold.chart, e.sampling, r.points, r.seed);
}

std::vector<Point> warped_points(const WarpedEntry& e, const RunOptions& r)
{
    auto pts = sample_points(e.space.chart(), e.sampling, r.points, r.seed);
    e.space.require_positive_warp(pts);
    return pts;
}

using ManifoldSuite = std::function<VerificationReport(const PoissonManifold&, std::span<const Point>, const RunOptions&)>;
using WarpedSuite = std::function<VerificationReport(const WarpedSpace&, std::span<const Point>, const RunOptions&)>;

// Runs a suite on the selected target, or on every manifold and warped
// product when no target is given. A null suite skips that kind of object.
VerificationReport over_targets(const Manifest& m, const std::string& target, const RunOptions& r,
                                const ManifoldSuite& on_manifold, const WarpedSuite& on_warped)
{
    VerificationReport rep;
    bool any = false;
    for (const auto& e : m.manifolds)
        if (on_manifold && (target.empty() || target == e.manifold.name)) {
            rep.append(on_manifold(e.manifold, manifold_points(e, r), r));
            any = true;
        }
    for (const auto& e : m.warped)
        if (on_warped && (target.empty() || target == e.space.name())) {
            rep.append(on_warped(e.space, warped_points(e, r), r));
            any = true;
        }
    if (!any) {
        if (!target.empty() && !m.find_manifold(target) && !m.find_warped(target))
            throw ManifestError("unresolved_reference", "--target", "unknown target '" + target + "'");
        throw InvalidArgumentError("nothing to run: manifest '" + m.source + "' has no applicable " +
                                   (on_manifold ? "target" : "warped product") +
                                   (target.empty() ? "" : " named '" + target + "'"));
    }
    return rep;
}

// On a warped product, the plain manifold suites run on the assembled product.
WarpedSuite on_product(const ManifoldSuite& s)
{
    return [s](const WarpedSpace& w, std::span<const Point> pts, const RunOptions& r) {
        return s(w.product(), pts, r);
    };
}

const WarpedEntry& single_warped(const Manifest& m, const std::string& target)
{
    if (!target.empty()) {
        if (const auto* w = m.find_warped(target))
            return *w;
        throw ManifestError("unresolved_reference", "--target", "unknown warped product '" + target + "'");
    }
    if (m.warped.size() != 1)
        throw InvalidArgumentError("manifest '" + m.source + "' has " + std::to_string(m.warped.size()) +
                                   " warped products; choose one with --target");
    return m.warped.front();
}

double require(const std::optional<double>& v, const char* flag)
{
    if (!v)
        throw InvalidArgumentError(std::string("missing ") + flag);
    return *v;
}

// Constant of a factor, checked for constancy over the sample points.
double factor_constant(VerificationReport& rep, const char* name, const PoissonManifold& m,
                       std::span<const Point> pts, const RunOptions& r, bool scalar)
{
    if (!scalar) {
        const EinsteinVerdict v = einstein_check(m, pts, r.tol);
        rep.add_flag(name, m.name, v.is_einstein,
                     v.is_einstein ? "Einstein, lambda = " + std::to_string(v.lambda_estimate) : "not Einstein");
        return v.lambda_estimate;
    }
    const ConnectionCoefficients d(m);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (const auto& p : pts) {
        const double s = scalar_curvature(d, p);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        sum += s;
    }
    const double spread = std::isfinite(hi - lo) ? hi - lo : std::numeric_limits<double>::infinity();
    rep.add(name, m.name, spread, r.tol, pts.size(), r.seed, "spread of the scalar curvature");
    return sum / static_cast<double>(pts.size());
}

Result solve(const Options& o, const Manifest* m)
{
    Result res;
    std::string target;
    res.run = resolve(o, m, target);
    const bool einstein = o.command == "solve-warp";

    std::optional<double> base_c, fiber_c;
    std::optional<int> s2 = o.s2;
    if (m) {
        const WarpedEntry& w = single_warped(*m, target);
        const auto pts = warped_points(w, res.run);
        // Factor points: the product sample restricted to each chart.
        std::vector<Point> bp, fp;
        for (const auto& p : pts) {
            bp.push_back(w.space.base().chart.point(w.space.base().chart.coordinates(p)));
            fp.push_back(w.space.fiber().chart.point(w.space.fiber().chart.coordinates(p)));
        }
        base_c = factor_constant(res.report, einstein ? "base.einstein" : "base.scalar_constant", w.space.base(), bp,
                                 res.run, !einstein);
        fiber_c = factor_constant(res.report, einstein ? "fiber.einstein" : "fiber.scalar_constant",
                                  w.space.fiber(), fp, res.run, !einstein);
        if (!s2)
            s2 = static_cast<int>(w.space.s2());
    }
    if (einstein) {
        const double lambda = o.lambda ? *o.lambda : require(base_c, "--lambda");
        const double lambda_hat = o.lambda_hat ? *o.lambda_hat : require(fiber_c, "--lambda-hat");
        res.solution = solve_einstein_warp(lambda, lambda_hat);
        res.report.diagnostics.push_back({"lambda", "", lambda, o.lambda ? "flag" : "base estimate"});
        res.report.diagnostics.push_back({"lambda_hat", "", lambda_hat, o.lambda_hat ? "flag" : "fiber estimate"});
    } else {
        const double s_b = o.sb ? *o.sb : require(base_c, "--sb");
        const double mu = o.mu ? *o.mu : require(fiber_c, "--mu");
        const double mu1 = require(o.mu1, "--mu1");
        if (!s2)
            throw InvalidArgumentError("missing --s2");
        res.solution = solve_constant_scalar(s_b, mu, mu1, *s2);
        res.report.diagnostics.push_back({"S_B", "", s_b, o.sb ? "flag" : "base estimate"});
        res.report.diagnostics.push_back({"mu", "", mu, o.mu ? "flag" : "fiber estimate"});
        res.report.diagnostics.push_back({"mu1", "", mu1, "flag"});
        res.report.diagnostics.push_back({"s2", "", static_cast<double>(*s2), o.s2 ? "flag" : "fiber dimension"});
    }
    return res;
}

Result dispatch(const Options& o)
{
    const bool solver = o.command == "solve-warp" || o.command == "solve-scalar";
    if (o.manifest.empty()) {
        if (solver)
            return solve(o, nullptr);
        throw InvalidArgumentError("command '" + o.command + "' needs a manifest");
    }
    const Manifest m = load_manifest(o.manifest);
    if (solver)
        return solve(o, &m);

    Result res;
    std::string target;
    res.run = resolve(o, &m, target);
    const RunOptions& r = res.run;
    const std::string& c = o.command;

    if (c == "validate") {
        res.report = over_targets(m, target, r, validate_suite,
                                  [](const WarpedSpace& w, std::span<const Point> pts, const RunOptions& ro) {
                                      auto rep = validate_suite(w.product(), pts, ro);
                                      rep.add_flag("warp.positive", w.name(), true, "f > 0 at every sample point");
                                      return rep;
                                  });
        res.report.diagnostics.push_back({"manifest.manifolds", m.source, static_cast<double>(m.manifolds.size()), ""});
        res.report.diagnostics.push_back(
            {"manifest.warped_products", m.source, static_cast<double>(m.warped.size()), ""});
        res.report.diagnostics.push_back({"manifest.tasks", m.source, static_cast<double>(m.tasks.size()), ""});
    } else if (c == "connection") {
        res.report = over_targets(m, target, r, connection_suite, on_product(connection_suite));
    } else if (c == "curvature") {
        res.report = over_targets(m, target, r, curvature_suite, on_product(curvature_suite));
    } else if (c == "ricci") {
        res.report = over_targets(m, target, r, ricci_suite, on_product(ricci_suite));
    } else if (c == "scalar") {
        res.report = over_targets(m, target, r, scalar_suite, on_product(scalar_suite));
    } else if (c == "laplacian") {
        const ManifoldSuite lap = [&m](const PoissonManifold& pm, std::span<const Point> pts, const RunOptions& ro) {
            return laplacian_suite(pm, m.fields, pts, ro);
        };
        res.report = over_targets(m, target, r, lap, on_product(lap));
    } else if (c == "compat") {
        res.report = over_targets(m, target, r, compat_suite, warp_compat_suite);
    } else if (c == "warp-verify") {
        res.report = over_targets(m, target, r, nullptr, warp_verify_suite);
    } else if (c == "einstein") {
        res.report = over_targets(m, target, r, einstein_suite, warp_einstein_suite);
    } else {
        throw InvalidArgumentError("unknown command '" + c + "'");
    }
    return res;
}

ordered_json number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

ordered_json solution_json(const WarpSolution& s)
{
    ordered_json j;
    j["kind"] = to_string(s.kind);
    if (s.kind == WarpSolution::Kind::ConstantF)
        j["f"] = s.f_value;
    else
        j["f"] = nullptr;
    j["rationale"] = s.rationale;
    return j;
}

void write_json(std::ostream& out, const Options& o, const Result& res)
{
    ordered_json j;
    j["command"] = o.command;
    j["manifest"] = o.manifest.empty() ? ordered_json(nullptr) : ordered_json(o.manifest);
    j["points"] = res.run.points;
    j["seed"] = res.run.seed;
    j["tolerance"] = res.run.tol;
    if (res.solution)
        j["solution"] = solution_json(*res.solution);
    ordered_json checks = ordered_json::array();
    for (const auto& c : res.report.checks) {
        ordered_json e;
        e["name"] = c.name;
        e["target"] = c.target;
        e["passed"] = c.passed;
        e["max_residual"] = number(c.max_residual);
        e["tolerance"] = number(c.tolerance);
        e["points"] = c.points;
        e["seed"] = c.seed;
        if (!c.note.empty())
            e["note"] = c.note;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    ordered_json diags = ordered_json::array();
    for (const auto& d : res.report.diagnostics) {
        ordered_json e;
        e["name"] = d.name;
        e["target"] = d.target;
        e["value"] = number(d.value);
        if (!d.note.empty())
            e["note"] = d.note;
        diags.push_back(std::move(e));
    }
    j["diagnostics"] = std::move(diags);
    j["summary"] = {{"checks", res.report.checks.size()},
                    {"passed", res.report.passed()},
                    {"failed", res.report.failed()},
                    {"status", res.report.all_passed() ? "pass" : "fail"}};
    out << j.dump(2) << '\n';
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void write_text(std::ostream& out, const Options& o, const Result& res)
{
    out << "pw " << o.command;
    if (!o.manifest.empty())
        out << " " << o.manifest;
    out << "  (points " << res.run.points << ", seed " << res.run.seed << ", tol " << sci(res.run.tol) << ")\n";
    if (res.solution) {
        const auto& s = *res.solution;
        out << "solution: " << to_string(s.kind);
        if (s.kind == WarpSolution::Kind::ConstantF) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", s.f_value);
            out << ", f = " << buf;
        }
        out << "\n  " << s.rationale << "\n";
    }

    std::size_t wn = 5, wt = 6;
    for (const auto& c : res.report.checks) {
        wn = std::max(wn, c.name.size());
        wt = std::max(wt, c.target.size());
    }
    for (const auto& d : res.report.diagnostics) {
        wn = std::max(wn, d.name.size());
        wt = std::max(wt, d.target.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };

    if (!res.report.checks.empty()) {
        out << "\n" << pad("", 6) << pad("check", wn) << "  " << pad("target", wt) << "  residual    tolerance\n";
        for (const auto& c : res.report.checks) {
            out << (c.passed ? "PASS  " : "FAIL  ") << pad(c.name, wn) << "  " << pad(c.target, wt) << "  "
                << pad(sci(c.max_residual), 10) << "  " << sci(c.tolerance);
            if (!c.note.empty())
                out << "  " << c.note;
            out << "\n";
        }
    }
    if (!res.report.diagnostics.empty()) {
        out << "\n" << pad("", 6) << pad("diagnostic", wn) << "  " << pad("target", wt) << "  value\n";
        for (const auto& d : res.report.diagnostics) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", d.value);
            out << pad("", 6) << pad(d.name, wn) << "  " << pad(d.target, wt) << "  " << buf;
            if (!d.note.empty())
                out << "  " << d.note;
            out << "\n";
        }
    }
    out << "\n" << res.report.passed() << "/" << res.report.checks.size() << " checks passed: "
        << (res.report.all_passed() ? "PASS" : "FAIL") << "\n";
}

void write_error(std::ostream& out, std::ostream& err, const Options& o, const std::string& kind,
                 const std::string& message, const ManifestError* me)
{
    if (o.format == Format::Json) {
        ordered_json j;
        j["command"] = o.command;
        j["error"]["kind"] = kind;
        j["error"]["message"] = message;
        if (me) {
            if (!me->where().empty())
                j["error"]["where"] = me->where();
            if (me->position())
                j["error"]["position"] = *me->position();
        }
        out << j.dump(2) << '\n';
    } else {
        err << "pw " << o.command << ": error [" << kind << "]: " << message;
        if (me && me->position())
            err << " (at character " << *me->position() << ")";
        err << '\n';
    }
}

} // namespace

int run(const Options& o, std::ostream& out, std::ostream& err)
{
    try {
        if (std::find(commands().begin(), commands().end(), o.command) == commands().end())
            throw InvalidArgumentError("unknown command '" + o.command + "'");
        const Result res = dispatch(o);
        if (o.format == Format::Json)
            write_json(out, o, res);
        else
            write_text(out, o, res);
        return res.report.all_passed() ? kExitPass : kExitFail;
    } catch (const ManifestError& e) {
        write_error(out, err, o, e.kind(), e.what(), &e);
    } catch (const expr::ParseError& e) {
        write_error(out, err, o, e.kind(), e.what(), nullptr);
    } catch (const Error& e) {
        write_error(out, err, o, e.kind(), e.what(), nullptr);
    } catch (const std::exception& e) {
        write_error(out, err, o, "internal", e.what(), nullptr);
    }
    return kExitError;
}

} // namespace pw::cli
