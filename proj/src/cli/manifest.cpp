#include "pw/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace pw {

using nlohmann::json;

ManifestError::ManifestError(std::string kind, std::string where, const std::string& message,
                             std::optional<std::size_t> position)
    : Error(std::move(kind), where.empty() ? message : where + ": " + message),
      where_(std::move(where)),
      position_(position)
{
}

const ManifoldEntry* Manifest::find_manifold(std::string_view name) const
{
    for (const auto& m : manifolds)
        if (m.manifold.name == name)
            return &m;
    return nullptr;
}

const WarpedEntry* Manifest::find_warped(std::string_view name) const
{
    for (const auto& w : warped)
        if (w.space.name() == name)
            return &w;
    return nullptr;
}

const TaskEntry* Manifest::find_task(std::string_view command) const
{
    for (const auto& t : tasks)
        if (t.command == command)
            return &t;
    return nullptr;
}

namespace {

std::string at(const std::string& where, std::string_view key) { return where + "." + std::string(key); }
std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

[[noreturn]] void invalid(const std::string& where, const std::string& message)
{
    throw ManifestError("invalid_manifest", where, message);
}

const json& member(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        invalid(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        invalid(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string string_member(const json& obj, const char* key, const std::string& where)
{
    const json& v = member(obj, key, where);
    if (!v.is_string())
        invalid(at(where, key), "expected a string");
    return v.get<std::string>();
}

const json& array_or_empty(const json& obj, const char* key, const std::string& where)
{
    static const json empty = json::array();
    if (!obj.is_object())
        invalid(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        return empty;
    if (!it->is_array())
        invalid(at(where, key), "expected an array");
    return *it;
}

ScalarField parse_expr(const json& v, const std::vector<std::string>& vars, const std::string& where)
{
    std::string text;
    if (v.is_string())
        text = v.get<std::string>();
    else if (v.is_number())
        text = v.dump();
    else
        invalid(where, "expected an expression string or a number");
    try {
        return expr::parse(text, vars);
    } catch (const expr::UnknownIdentifierError& e) {
        throw ManifestError("coordinate_mismatch", where, "in '" + text + "': " + e.what(), e.position());
    } catch (const expr::ParseError& e) {
        throw ManifestError("parse_error", where, "in '" + text + "': " + e.what(), e.position());
    }
}

std::size_t parse_index(const json& v, const Chart& chart, const std::string& where)
{
    if (v.is_number_integer()) {
        const auto i = v.get<long long>();
        if (i < 0 || static_cast<std::size_t>(i) >= chart.dim())
            invalid(where, "index " + std::to_string(i) + " out of range for chart '" + chart.name() + "'");
        return static_cast<std::size_t>(i);
    }
    if (v.is_string()) {
        const auto name = v.get<std::string>();
        if (!chart.contains(name))
            throw ManifestError("coordinate_mismatch", where,
                                "'" + name + "' is not a coordinate of chart '" + chart.name() + "'");
        return chart.index_of(name);
    }
    invalid(where, "index must be an integer or a coordinate name");
}

struct RawEntry {
    std::size_t i, j;
    ScalarField value;
};

std::vector<RawEntry> parse_entries(const json& list, const Chart& chart, bool strict, const std::string& where)
{
    std::vector<RawEntry> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t n = 0; n < list.size(); ++n) {
        const std::string w = at(where, n);
        const json& e = list[n];
        const std::size_t i = parse_index(member(e, "i", w), chart, at(w, "i"));
        const std::size_t j = parse_index(member(e, "j", w), chart, at(w, "j"));
        if (strict ? !(i < j) : !(i <= j))
            invalid(w, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") must have i " +
                           (strict ? "<" : "<=") + " j");
        if (!seen.insert({i, j}).second)
            invalid(w, "duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        out.push_back({i, j, parse_expr(member(e, "expr", w), chart.coords(), at(w, "expr"))});
    }
    return out;
}

SamplingSpec parse_sampling(const json& obj, const std::vector<std::string>& coords, const std::string& where)
{
    SamplingSpec s;
    const auto it = obj.find("sampling");
    if (it == obj.end())
        return s;
    const std::string w = at(where, "sampling");
    if (!it->is_object())
        invalid(w, "expected an object");
    if (const auto box = it->find("box"); box != it->end()) {
        if (!box->is_object())
            invalid(at(w, "box"), "expected an object of coordinate ranges");
        for (const auto& [name, range] : box->items()) {
            const std::string wb = at(at(w, "box"), name);
            if (std::find(coords.begin(), coords.end(), name) == coords.end())
                throw ManifestError("coordinate_mismatch", wb, "'" + name + "' is not a coordinate");
            if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
                invalid(wb, "expected [lo, hi]");
            const double lo = range[0].get<double>(), hi = range[1].get<double>();
            if (!(lo < hi))
                invalid(wb, "empty range");
            s.box.push_back({name, {lo, hi}});
        }
    }
    const json& avoid = array_or_empty(*it, "avoid", w);
    for (std::size_t n = 0; n < avoid.size(); ++n) {
        const std::string wa = at(at(w, "avoid"), n);
        const json& m = member(avoid[n], "min_abs", wa);
        if (!m.is_number() || m.get<double>() < 0.0)
            invalid(at(wa, "min_abs"), "expected a nonnegative number");
        s.avoid.push_back({parse_expr(member(avoid[n], "expr", wa), coords, at(wa, "expr")), m.get<double>()});
    }
    return s;
}

template <class T, class Name>
void require_unique(const std::vector<T>& xs, Name name, const std::string& what, const std::string& where)
{
    std::set<std::string> seen;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!seen.insert(name(xs[i])).second)
            invalid(at(where, i), "duplicate " + what + " name '" + name(xs[i]) + "'");
}

} // namespace

Manifest parse_manifest(std::string_view text, std::string source)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ManifestError("json_parse_error", source, e.what(), e.byte);
    }
    if (!doc.is_object())
        invalid(source, "top level must be an object");

    Manifest m;
    m.source = source;

    const json& charts = array_or_empty(doc, "charts", "");
    for (std::size_t n = 0; n < charts.size(); ++n) {
        const std::string w = at("charts", n);
        const json& coords = member(charts[n], "coords", w);
        if (!coords.is_array() || coords.empty())
            invalid(at(w, "coords"), "expected a nonempty array of names");
        std::vector<std::string> names;
        for (const auto& c : coords) {
            if (!c.is_string())
                invalid(at(w, "coords"), "coordinate names must be strings");
            names.push_back(c.get<std::string>());
        }
        try {
            m.charts.emplace_back(string_member(charts[n], "name", w), std::move(names));
        } catch (const InvalidArgumentError& e) {
            invalid(w, e.what());
        }
    }
    require_unique(m.charts, [](const Chart& c) { return c.name(); }, "chart", "charts");

    auto chart_ref = [&](const json& obj, const std::string& where) -> const Chart& {
        const std::string name = string_member(obj, "chart", where);
        for (const auto& c : m.charts)
            if (c.name() == name)
                return c;
        throw ManifestError("unresolved_reference", at(where, "chart"), "unknown chart '" + name + "'");
    };

    const json& fields = array_or_empty(doc, "fields", "");
    for (std::size_t n = 0; n < fields.size(); ++n) {
        const std::string w = at("fields", n);
        const Chart& c = chart_ref(fields[n], w);
        m.fields.push_back({string_member(fields[n], "name", w), c,
                            parse_expr(member(fields[n], "expr", w), c.coords(), at(w, "expr"))});
    }
    require_unique(m.fields, [](const FieldEntry& f) { return f.name; }, "field", "fields");

    const json& manifolds = array_or_empty(doc, "manifolds", "");
    for (std::size_t n = 0; n < manifolds.size(); ++n) {
        const std::string w = at("manifolds", n);
        const json& obj = manifolds[n];
        const Chart& c = chart_ref(obj, w);
        std::vector<BivectorField::Entry> pe;
        for (auto& e : parse_entries(array_or_empty(obj, "bivector", w), c, true, at(w, "bivector")))
            pe.push_back({e.i, e.j, std::move(e.value)});
        std::vector<Cometric::Entry> ge;
        for (auto& e : parse_entries(array_or_empty(obj, "cometric", w), c, false, at(w, "cometric")))
            ge.push_back({e.i, e.j, std::move(e.value)});
        if (ge.empty())
            invalid(at(w, "cometric"), "a cometric needs at least one entry");
        m.manifolds.push_back({PoissonManifold(string_member(obj, "name", w), BivectorField(c, pe), Cometric(c, ge)),
                               parse_sampling(obj, c.coords(), w)});
    }
    require_unique(m.manifolds, [](const ManifoldEntry& e) { return e.manifold.name; }, "manifold", "manifolds");

    const json& warped = array_or_empty(doc, "warped_products", "");
    for (std::size_t n = 0; n < warped.size(); ++n) {
        const std::string w = at("warped_products", n);
        const json& obj = warped[n];
        auto ref = [&](const char* key) -> const ManifoldEntry& {
            const std::string name = string_member(obj, key, w);
            if (const auto* e = m.find_manifold(name))
                return *e;
            throw ManifestError("unresolved_reference", at(w, key), "unknown manifold '" + name + "'");
        };
        const ManifoldEntry& base = ref("base");
        const ManifoldEntry& fiber = ref("fiber");
        const std::string name = string_member(obj, "name", w);

        // The warp may name a field or be an expression. It is parsed against
        // both factors so that a fiber coordinate is reported as such.
        std::vector<std::string> all = base.manifold.chart.coords();
        for (const auto& c : fiber.manifold.chart.coords())
            all.push_back(c);
        const json& warp = member(obj, "warp", w);
        ScalarField f;
        bool named = false;
        if (warp.is_string())
            for (const auto& fe : m.fields)
                if (fe.name == warp.get<std::string>()) {
                    f = fe.expr;
                    named = true;
                }
        if (!named)
            f = parse_expr(warp, all, at(w, "warp"));
        try {
            WarpedSpace space(name, base.manifold, fiber.manifold, f);
            SamplingSpec s = WarpedSpace::product_sampling(base.sampling, fiber.sampling);
            const SamplingSpec own = parse_sampling(obj, space.chart().coords(), w);
            s.box.insert(s.box.end(), own.box.begin(), own.box.end());
            s.avoid.insert(s.avoid.end(), own.avoid.begin(), own.avoid.end());
            m.warped.push_back({std::move(space), std::move(s)});
        } catch (const InvalidArgumentError& e) {
            throw ManifestError("coordinate_mismatch", w, e.what());
        }
    }
    require_unique(m.warped, [](const WarpedEntry& e) { return e.space.name(); }, "warped product",
                   "warped_products");

    const json& tasks = array_or_empty(doc, "tasks", "");
    for (std::size_t n = 0; n < tasks.size(); ++n) {
        const std::string w = at("tasks", n);
        TaskEntry t;
        t.command = string_member(tasks[n], "command", w);
        for (const auto& [key, value] : tasks[n].items()) {
            if (key == "command")
                continue;
            if (key == "target") {
                if (!value.is_string())
                    invalid(at(w, key), "expected a string");
                t.target = value.get<std::string>();
                if (!m.find_manifold(t.target) && !m.find_warped(t.target))
                    throw ManifestError("unresolved_reference", at(w, key), "unknown target '" + t.target + "'");
            } else if (value.is_number()) {
                t.params[key] = value.get<double>();
            } else {
                invalid(at(w, key), "task parameters must be numbers");
            }
        }
        m.tasks.push_back(std::move(t));
    }
    return m;
}

Manifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ManifestError("io_error", path, "cannot open manifest");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_manifest(s.str(), path);
}

} // namespace pw
