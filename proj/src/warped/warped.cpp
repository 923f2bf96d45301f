#include "pw/warped.hpp"

#include "pw/parallel.hpp"

#include <array>
#include <cmath>
#include <random>

namespace pw {

namespace {

using Vec = std::vector<double>;

Chart product_chart(const std::string& name, const Chart& b, const Chart& f)
{
    std::vector<std::string> coords = b.coords();
    for (const auto& c : f.coords()) {
        if (b.contains(c))
            throw InvalidArgumentError("warped product '" + name + "': coordinate '" + c +
                                       "' appears in both base and fiber");
        coords.push_back(c);
    }
    return {name, std::move(coords)};
}

ScalarField base_warp(const std::string& name, const Chart& base, const Chart& fiber, const ScalarField& f)
{
    for (const auto& v : f.referenced())
        if (!base.contains(v)) {
            const std::string where = fiber.contains(v) ? "fiber coordinate" : "unknown coordinate";
            throw InvalidArgumentError("warped product '" + name + "': warp function uses " + where + " '" + v + "'");
        }
    return f.with_vars(base.coords());
}

PoissonManifold assemble(const std::string& name, const Chart& chart, const PoissonManifold& b,
                         const PoissonManifold& fb, const ScalarField& f)
{
    const auto& coords = chart.coords();
    const std::size_t s1 = b.chart.dim(), s2 = fb.chart.dim();

    std::vector<BivectorField::Entry> pe;
    for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = i + 1; j < s1; ++j)
            if (auto e = b.pi.entry(i, j); !e.is_zero())
                pe.push_back({i, j, e.with_vars(coords)});
    for (std::size_t i = 0; i < s2; ++i)
        for (std::size_t j = i + 1; j < s2; ++j)
            if (auto e = fb.pi.entry(i, j); !e.is_zero())
                pe.push_back({s1 + i, s1 + j, e.with_vars(coords)});

    const ScalarField inv_f2 = expr::pow(f.with_vars(coords), -2.0);
    std::vector<Cometric::Entry> ge;
    for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = i; j < s1; ++j)
            if (auto e = b.g.entry(i, j); !e.is_zero())
                ge.push_back({i, j, e.with_vars(coords)});
    for (std::size_t i = 0; i < s2; ++i)
        for (std::size_t j = i; j < s2; ++j)
            if (auto e = fb.g.entry(i, j); !e.is_zero())
                ge.push_back({s1 + i, s1 + j, e.with_vars(coords) * inv_f2});

    return {name, BivectorField(chart, pe), Cometric(chart, ge)};
}

ComponentJets constant(const Vec& v, std::size_t dim, int order)
{
    ComponentJets out;
    out.reserve(v.size());
    for (double x : v)
        out.emplace_back(dim, order, x);
    return out;
}

Vec unit(std::size_t n, std::size_t i)
{
    Vec v(n, 0.0);
    v[i] = 1.0;
    return v;
}

/// Coordinate covectors plus one random one.
std::vector<Vec> spanning_set(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(unit(n, i));
    Vec r(n);
    for (auto& x : r)
        x = u(rng);
    out.push_back(std::move(r));
    return out;
}

std::mt19937_64 point_rng(std::uint64_t seed, std::size_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

Vec operator+(Vec a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

Vec operator*(double s, Vec a)
{
    for (auto& x : a)
        x *= s;
    return a;
}

Vec values_of(const ComponentJets& v) { return values(v); }

} // namespace

// ---------------------------------------------------------------------------

WarpedSpace::WarpedSpace(std::string name, PoissonManifold base, PoissonManifold fiber, ScalarField f)
    : name_(std::move(name)),
      base_(std::move(base)),
      fiber_(std::move(fiber)),
      f_(base_warp(name_, base_.chart, fiber_.chart, f)),
      f_smooth_(base_.chart, f_),
      product_(assemble(name_, product_chart(name_, base_.chart, fiber_.chart), base_, fiber_, f_))
{
}

Vec WarpedSpace::lift_h(std::span<const double> a) const
{
    Vec out(s1() + s2(), 0.0);
    std::copy(a.begin(), a.end(), out.begin());
    return out;
}

Vec WarpedSpace::lift_v(std::span<const double> a) const
{
    Vec out(s1() + s2(), 0.0);
    std::copy(a.begin(), a.end(), out.begin() + static_cast<std::ptrdiff_t>(s1()));
    return out;
}

CovectorField WarpedSpace::horizontal_lift(const CovectorField& alpha) const
{
    require_same_chart(alpha.chart(), base_.chart, "horizontal_lift");
    std::vector<ScalarField> comps;
    for (const auto& c : alpha.components())
        comps.push_back(c.with_vars(chart().coords()));
    for (std::size_t i = 0; i < s2(); ++i)
        comps.push_back(ScalarField::constant(0.0, chart().coords()));
    return {chart(), std::move(comps)};
}

CovectorField WarpedSpace::vertical_lift(const CovectorField& alpha) const
{
    require_same_chart(alpha.chart(), fiber_.chart, "vertical_lift");
    std::vector<ScalarField> comps;
    for (std::size_t i = 0; i < s1(); ++i)
        comps.push_back(ScalarField::constant(0.0, chart().coords()));
    for (const auto& c : alpha.components())
        comps.push_back(c.with_vars(chart().coords()));
    return {chart(), std::move(comps)};
}

void WarpedSpace::require_positive_warp(std::span<const Point> points) const
{
    for (const auto& p : points) {
        double v;
        try {
            v = f_smooth_.value(base_.chart.coordinates(p));
        } catch (const expr::DomainError& e) {
            throw InvalidArgumentError("warped product '" + name_ + "': warp function undefined at a sample point (" +
                                       e.what() + ")");
        }
        if (!(v > 0.0))
            throw InvalidArgumentError("warped product '" + name_ + "': warp function is not positive (f = " +
                                       std::to_string(v) + " at a sample point)");
    }
}

SamplingSpec WarpedSpace::product_sampling(const SamplingSpec& base, const SamplingSpec& fiber)
{
    SamplingSpec s = base;
    s.box.insert(s.box.end(), fiber.box.begin(), fiber.box.end());
    s.avoid.insert(s.avoid.end(), fiber.avoid.begin(), fiber.avoid.end());
    return s;
}

WarpedSpace build_warped(std::string name, PoissonManifold base, PoissonManifold fiber, ScalarField f,
                         std::span<const Point> points)
{
    WarpedSpace w(std::move(name), std::move(base), std::move(fiber), std::move(f));
    w.require_positive_warp(points);
    return w;
}

// ---------------------------------------------------------------------------

VerificationReport sharp_decomposition_check(const WarpedSpace& w, std::span<const Point> points, double tol,
                                             std::uint64_t seed)
{
    enum { SharpH, SharpV, BracketHH, BracketVV, BracketHV, BracketMixed, Count };
    using Row = std::array<MaxAbs, Count>;
    const std::size_t n = w.s1() + w.s2();

    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const Point& p = points[idx];
        auto rng = point_rng(seed, idx);
        const LocalGeometry prod(w.product(), p, 2), base(w.base(), p, 2), fib(w.fiber(), p, 2);
        const auto bset = spanning_set(w.s1(), rng);
        const auto fset = spanning_set(w.s2(), rng);
        Row row;
        auto diff = [&](MaxAbs& m, const Vec& a, const Vec& b) {
            for (std::size_t k = 0; k < a.size(); ++k)
                m.add(a[k] - b[k]);
        };
        auto psharp = [&](const Vec& a) { return values_of(prod.sharp(constant(a, n, 0))); };
        auto pbracket = [&](const Vec& a, const Vec& b) {
            return values_of(prod.bracket(constant(a, n, 1), constant(b, n, 1)));
        };
        for (const auto& a : bset) {
            diff(row[SharpH], psharp(w.lift_h(a)), w.lift_h(values_of(base.sharp(constant(a, w.s1(), 0)))));
            for (const auto& b : bset)
                diff(row[BracketHH], pbracket(w.lift_h(a), w.lift_h(b)),
                     w.lift_h(values_of(base.bracket(constant(a, w.s1(), 1), constant(b, w.s1(), 1)))));
            for (const auto& b : fset) {
                diff(row[BracketHV], pbracket(w.lift_h(a), w.lift_v(b)), Vec(n, 0.0));
                diff(row[BracketHV], pbracket(w.lift_v(b), w.lift_h(a)), Vec(n, 0.0));
            }
        }
        for (const auto& a : fset) {
            diff(row[SharpV], psharp(w.lift_v(a)), w.lift_v(values_of(fib.sharp(constant(a, w.s2(), 0)))));
            for (const auto& b : fset)
                diff(row[BracketVV], pbracket(w.lift_v(a), w.lift_v(b)),
                     w.lift_v(values_of(fib.bracket(constant(a, w.s2(), 1), constant(b, w.s2(), 1)))));
        }
        // [α1^h + α2^v, β1^h + β2^v] = [α1, β1]^h + [α2, β2]^v
        const Vec& a1 = bset.back(), &a2 = fset.back();
        const Vec b1 = bset.front(), b2 = fset.front();
        diff(row[BracketMixed], pbracket(w.lift_h(a1) + w.lift_v(a2), w.lift_h(b1) + w.lift_v(b2)),
             w.lift_h(values_of(base.bracket(constant(a1, w.s1(), 1), constant(b1, w.s1(), 1)))) +
                 w.lift_v(values_of(fib.bracket(constant(a2, w.s2(), 1), constant(b2, w.s2(), 1)))));
        return row;
    });

    Row total;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < Count; ++c)
            total[c].merge(r[c]);
    VerificationReport rep;
    const std::array<const char*, Count> names = {"sharp.h",    "sharp.v",    "bracket.hh",
                                                  "bracket.vv", "bracket.hv", "bracket.mixed"};
    for (std::size_t c = 0; c < Count; ++c)
        rep.add(names[c], w.name(), total[c].value(), tol, points.size(), seed);
    return rep;
}

// ---------------------------------------------------------------------------

WarpedOracle::WarpedOracle(const WarpedSpace& w, const Point& p)
    : w_(&w),
      base_(w.base(), p),
      fiber_(w.fiber(), p),
      f_(w.warp_smooth().jet(w.base().chart.coordinates(p), 2))
{
    ComponentJets df;
    for (std::size_t k = 0; k < w.s1(); ++k)
        df.push_back(f_.partial(k));
    j1df_ = base_.geometry().j_map(df);
}

Vec WarpedOracle::j1df() const { return values(j1df_); }

double WarpedOracle::gb(const Vec& a, const Vec& b) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += a[i] * base_.geometry().g(i, j).value() * b[j];
    return s;
}

double WarpedOracle::gf(const Vec& a, const Vec& b) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += a[i] * fiber_.geometry().g(i, j).value() * b[j];
    return s;
}

double WarpedOracle::j1df_norm2() const
{
    const Vec j = j1df();
    return gb(j, j);
}

double WarpedOracle::base_laplacian() const { return base_.laplacian(f_); }

double WarpedOracle::base_hessian(const Vec& a1, const Vec& b1) const { return base_.hessian(f_, a1, b1); }

bool WarpedOracle::casimir(double tol) const
{
    const Vec j = j1df();
    return std::all_of(j.begin(), j.end(), [&](double x) { return std::abs(x) <= tol; });
}

Vec WarpedOracle::base_d_j1df(const Vec& a1) const
{
    return values(base_.apply(constant(a1, w_->s1(), 0), j1df_));
}

Vec WarpedOracle::connection_hh(const Vec& a1, const Vec& b1) const
{
    const std::size_t s1 = w_->s1();
    return w_->lift_h(values(base_.apply(constant(a1, s1, 0), constant(b1, s1, 1))));
}

Vec WarpedOracle::connection_vv(const Vec& a2, const Vec& b2) const
{
    const std::size_t s2 = w_->s2();
    const double f = this->f();
    const Vec dF = values(fiber_.apply(constant(a2, s2, 0), constant(b2, s2, 1)));
    return w_->lift_v(dF) + (-gf(a2, b2) / (f * f * f)) * w_->lift_h(j1df());
}

Vec WarpedOracle::connection_hv(const Vec& a1, const Vec& b2) const
{
    return (gb(j1df(), a1) / f()) * w_->lift_v(b2);
}

Vec WarpedOracle::curvature_hh(const Vec& a1, const Vec& b1, const Vec& c1, const Vec& c2) const
{
    const std::size_t s1 = w_->s1();
    const double f = this->f();
    const Vec rb = base_.curvature(constant(a1, s1, 1), constant(b1, s1, 1), constant(c1, s1, 2));
    const Vec j = j1df();
    // ♯_B(β)(f) = Σ β_i Π_B^{ik} ∂_k f
    auto sharp_f = [&](const Vec& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < s1; ++i)
            for (std::size_t k = 0; k < s1; ++k)
                s += b[i] * base_.geometry().pi(i, k).value() * f_.d(k);
        return s;
    };
    const double second = (gb(base_d_j1df(a1), b1) - gb(base_d_j1df(b1), a1)) / f;
    const double third = (sharp_f(b1) * gb(j, a1) - sharp_f(a1) * gb(j, b1)) / (f * f);
    return w_->lift_h(rb) + (second + third) * w_->lift_v(c2);
}

Vec WarpedOracle::curvature_hv_h(const Vec& a1, const Vec& b2, const Vec& c1) const
{
    const std::size_t s1 = w_->s1();
    const double f = this->f();
    const Vec j = j1df();
    // D^B_{α1}(J_B df / f)
    ComponentJets jf;
    const Jet inv = reciprocal(f_);
    for (const auto& c : j1df_)
        jf.push_back(c * inv);
    const Vec d = values(base_.apply(constant(a1, s1, 0), jf));
    return (gb(j, a1) * gb(j, c1) / (f * f) + gb(d, c1)) * w_->lift_v(b2);
}

Vec WarpedOracle::curvature_hv_v(const Vec& a1, const Vec& b2, const Vec& c2) const
{
    const double f = this->f();
    const Vec j = j1df();
    const Vec inner = (1.0 / (f * f * f)) * base_d_j1df(a1) + (2.0 * gb(j, a1) / (f * f * f * f)) * j;
    return (-gf(b2, c2)) * w_->lift_h(inner);
}

Vec WarpedOracle::curvature_vv_h(const Vec&, const Vec&, const Vec&) const { return Vec(w_->s1() + w_->s2(), 0.0); }

Vec WarpedOracle::curvature_vv_v(const Vec& a2, const Vec& b2, const Vec& c2) const
{
    const std::size_t s2 = w_->s2();
    const Vec rf = fiber_.curvature(constant(a2, s2, 1), constant(b2, s2, 1), constant(c2, s2, 2));
    return w_->lift_v(rf) + curvature_vv_v_base_term(a2, b2, c2);
}

Vec WarpedOracle::curvature_vv_v_base_term(const Vec& a2, const Vec& b2, const Vec& c2) const
{
    const double f = this->f();
    const double k = j1df_norm2() / (f * f * f * f);
    return k * w_->lift_v(gf(a2, c2) * b2 + (-gf(b2, c2)) * a2);
}

double WarpedOracle::a_form(const Vec& a1, const Vec& b1) const
{
    const Vec j = j1df();
    return gb(j, a1) * gb(j, b1);
}

double WarpedOracle::ricci_hh(const Vec& a1, const Vec& b1) const
{
    const double f = this->f();
    const double s2 = static_cast<double>(w_->s2());
    return base_.ricci(a1, b1) - s2 / (f * f) * (2.0 * a_form(a1, b1) + f * gb(base_d_j1df(a1), b1));
}

double WarpedOracle::ricci_hv(const Vec&, const Vec&) const { return 0.0; }

double WarpedOracle::ricci_vv(const Vec& a2, const Vec& b2) const
{
    const double f = this->f();
    const double s2 = static_cast<double>(w_->s2());
    const double k = (s2 + 1.0) * j1df_norm2() / (f * f * f * f) + base_laplacian() / (f * f * f);
    return fiber_.ricci(a2, b2) - k * gf(a2, b2);
}

double WarpedOracle::scalar() const
{
    const double f = this->f();
    const double s2 = static_cast<double>(w_->s2());
    return base_.scalar() + f * f * fiber_.scalar() -
           s2 * ((s2 + 3.0) / (f * f) * j1df_norm2() + 2.0 / f * base_laplacian());
}

double WarpedOracle::ricci_hh_casimir(const Vec& a1, const Vec& b1) const { return base_.ricci(a1, b1); }

double WarpedOracle::ricci_vv_casimir(const Vec& a2, const Vec& b2) const { return fiber_.ricci(a2, b2); }

double WarpedOracle::scalar_casimir() const
{
    const double f = this->f();
    return base_.scalar() + f * f * fiber_.scalar();
}

// ---------------------------------------------------------------------------

namespace {

enum Case {
    ConnHH,
    ConnVV,
    ConnHV,
    CurvHH,
    CurvHVH,
    CurvHVV,
    CurvVVH,
    CurvVVV,
    RicHH,
    RicHV,
    RicVV,
    Scalar,
    CasRicHH,
    CasRicHV,
    CasRicVV,
    CasScalar,
    CurvVVVBaseTerm,
    CaseCount
};

constexpr std::array<const char*, CaseCount> kCaseNames = {
    "connection.hh", "connection.vv", "connection.hv", "curvature.hh",       "curvature.hv_h",
    "curvature.hv_v", "curvature.vv_h", "curvature.vv_v", "ricci.hh",        "ricci.hv",
    "ricci.vv",      "scalar",        "casimir.ricci.hh", "casimir.ricci.hv", "casimir.ricci.vv",
    "casimir.scalar", "curvature.vv_v.base_term_reading"};

struct PointResult {
    std::array<MaxAbs, CaseCount> r;
    double casimir = 0.0;
};

Vec contract(const std::vector<double>& riemann, std::size_t n, const Vec& a, const Vec& b, const Vec& c)
{
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == 0.0)
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                const double w = a[i] * b[j] * c[k];
                if (w == 0.0)
                    continue;
                for (std::size_t l = 0; l < n; ++l)
                    out[l] += w * riemann[((i * n + j) * n + k) * n + l];
            }
        }
    }
    return out;
}

} // namespace

VerificationReport verify_decomposition(const WarpedSpace& w, std::span<const Point> points, double tol,
                                        std::uint64_t seed)
{
    const std::size_t n = w.s1() + w.s2();
    const std::size_t s1 = w.s1(), s2 = w.s2();

    const auto rows = parallel_map(points.size(), [&](std::size_t idx) {
        const Point& p = points[idx];
        auto rng = point_rng(seed, idx);
        const auto bset = spanning_set(s1, rng);
        const auto fset = spanning_set(s2, rng);
        const Vec zb(s1, 0.0), zf(s2, 0.0);

        const LocalConnection direct(w.product(), p);
        const WarpedOracle oracle(w, p);
        const auto& riemann = direct.curvature_tensor();

        PointResult res;
        auto cmp = [&](Case c, const Vec& d, const Vec& o) {
            for (std::size_t k = 0; k < d.size(); ++k)
                res.r[c].add(relative_residual(d[k], o[k]));
        };
        auto cmp1 = [&](Case c, double d, double o) { res.r[c].add(relative_residual(d, o)); };
        auto D = [&](const Vec& a, const Vec& b) { return values(direct.apply(constant(a, n, 0), constant(b, n, 1))); };
        auto R = [&](const Vec& a, const Vec& b, const Vec& c) { return contract(riemann, n, a, b, c); };

        for (const auto& a1 : bset)
            for (const auto& b1 : bset) {
                const Vec A = w.lift_h(a1), B = w.lift_h(b1);
                cmp(ConnHH, D(A, B), oracle.connection_hh(a1, b1));
                cmp1(RicHH, direct.ricci(A, B), oracle.ricci_hh(a1, b1));
                for (const auto& c1 : bset)
                    cmp(CurvHH, R(A, B, w.lift_h(c1)), oracle.curvature_hh(a1, b1, c1, zf));
                for (const auto& c2 : fset)
                    cmp(CurvHH, R(A, B, w.lift_v(c2)), oracle.curvature_hh(a1, b1, zb, c2));
                cmp(CurvHH, R(A, B, w.lift_h(bset.back()) + w.lift_v(fset.back())),
                    oracle.curvature_hh(a1, b1, bset.back(), fset.back()));
            }
        for (const auto& a2 : fset)
            for (const auto& b2 : fset) {
                const Vec A = w.lift_v(a2), B = w.lift_v(b2);
                cmp(ConnVV, D(A, B), oracle.connection_vv(a2, b2));
                cmp1(RicVV, direct.ricci(A, B), oracle.ricci_vv(a2, b2));
                for (const auto& c1 : bset)
                    cmp(CurvVVH, R(A, B, w.lift_h(c1)), oracle.curvature_vv_h(a2, b2, c1));
                for (const auto& c2 : fset) {
                    const Vec d = R(A, B, w.lift_v(c2));
                    cmp(CurvVVV, d, oracle.curvature_vv_v(a2, b2, c2));
                    cmp(CurvVVVBaseTerm, d, oracle.curvature_vv_v_base_term(a2, b2, c2));
                }
            }
        for (const auto& a1 : bset)
            for (const auto& b2 : fset) {
                const Vec A = w.lift_h(a1), B = w.lift_v(b2);
                const Vec o = oracle.connection_hv(a1, b2);
                cmp(ConnHV, D(A, B), o);
                cmp(ConnHV, D(B, A), o);
                cmp1(RicHV, direct.ricci(A, B), oracle.ricci_hv(a1, b2));
                cmp1(RicHV, direct.ricci(B, A), oracle.ricci_hv(a1, b2));
                for (const auto& c1 : bset)
                    cmp(CurvHVH, R(A, B, w.lift_h(c1)), oracle.curvature_hv_h(a1, b2, c1));
                for (const auto& c2 : fset)
                    cmp(CurvHVV, R(A, B, w.lift_v(c2)), oracle.curvature_hv_v(a1, b2, c2));
            }
        cmp1(Scalar, direct.scalar(), oracle.scalar());

        // Casimir forms, always evaluated; only reported when f is Casimir.
        for (const auto& a1 : bset)
            for (const auto& b1 : bset)
                cmp1(CasRicHH, direct.ricci(w.lift_h(a1), w.lift_h(b1)), oracle.ricci_hh_casimir(a1, b1));
        for (const auto& a1 : bset)
            for (const auto& b2 : fset)
                cmp1(CasRicHV, direct.ricci(w.lift_h(a1), w.lift_v(b2)), 0.0);
        for (const auto& a2 : fset)
            for (const auto& b2 : fset)
                cmp1(CasRicVV, direct.ricci(w.lift_v(a2), w.lift_v(b2)), oracle.ricci_vv_casimir(a2, b2));
        cmp1(CasScalar, direct.scalar(), oracle.scalar_casimir());

        for (double x : oracle.j1df())
            res.casimir = std::max(res.casimir, std::abs(x));
        return res;
    });

    PointResult total;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < CaseCount; ++c)
            total.r[c].merge(r.r[c]);
        total.casimir = std::max(total.casimir, r.casimir);
    }

    VerificationReport rep;
    const std::size_t np = points.size();
    for (std::size_t c = ConnHH; c <= Scalar; ++c)
        rep.add(kCaseNames[c], w.name(), total.r[c].value(), tol, np, seed);

    const bool casimir = total.casimir <= tol;
    if (casimir)
        for (std::size_t c = CasRicHH; c <= CasScalar; ++c)
            rep.add(kCaseNames[c], w.name(), total.r[c].value(), tol, np, seed);
    rep.diagnostics.push_back({"warp.casimir_residual", w.name(), total.casimir,
                               casimir ? "J_B df vanishes: warp function is Casimir"
                                       : "J_B df is nonzero: Casimir forms not applicable"});
    rep.diagnostics.push_back({kCaseNames[CurvVVVBaseTerm], w.name(), total.r[CurvVVVBaseTerm].value(),
                               "vv_v compared with the first term read as a base curvature of fiber covectors "
                               "(no defined value, taken as 0) instead of the fiber curvature"});
    return rep;
}

CompatibilitySplit compatibility_split(const WarpedSpace& w, std::span<const Point> points)
{
    const auto rows = parallel_map(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        MaxAbs a, b, c;
        for (double x : LocalConnection(w.product(), p).compatibility_residual())
            a.add(x);
        for (double x : LocalConnection(w.base(), p).compatibility_residual())
            b.add(x);
        for (double x : LocalConnection(w.fiber(), p).compatibility_residual())
            c.add(x);
        return CompatibilitySplit{a.value(), b.value(), c.value()};
    });
    CompatibilitySplit out;
    for (const auto& r : rows) {
        out.product = std::max(out.product, r.product);
        out.base = std::max(out.base, r.base);
        out.fiber = std::max(out.fiber, r.fiber);
    }
    return out;
}

} // namespace pw
