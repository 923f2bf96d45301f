#include "pw/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

namespace pw {

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::string name, std::vector<std::string> coords) : name_(std::move(name)), coords_(std::move(coords))
{
    if (coords_.empty())
        throw InvalidArgumentError("chart '" + name_ + "' must have at least one coordinate");
    std::set<std::string> seen;
    for (const auto& c : coords_)
        if (!seen.insert(c).second)
            throw InvalidArgumentError("chart '" + name_ + "' repeats coordinate '" + c + "'");
}

bool Chart::contains(std::string_view coord) const
{
    return std::find(coords_.begin(), coords_.end(), coord) != coords_.end();
}

std::size_t Chart::index_of(std::string_view coord) const
{
    auto it = std::find(coords_.begin(), coords_.end(), coord);
    if (it == coords_.end())
        throw InvalidArgumentError("chart '" + name_ + "' has no coordinate '" + std::string(coord) + "'");
    return static_cast<std::size_t>(it - coords_.begin());
}

std::vector<double> Chart::coordinates(const Point& p) const
{
    std::vector<double> x;
    x.reserve(coords_.size());
    for (const auto& c : coords_) {
        auto it = p.find(c);
        if (it == p.end())
            throw expr::MissingCoordinateError(c);
        x.push_back(it->second);
    }
    return x;
}

Point Chart::point(std::span<const double> x) const
{
    Point p;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        p[coords_[i]] = x[i];
    return p;
}

void require_same_chart(const Chart& a, const Chart& b, const char* what)
{
    if (!(a == b))
        throw ChartMismatchError(std::string(what) + ": charts '" + a.name() + "' and '" + b.name() + "' differ");
}

// ---------------------------------------------------------------------------
// SmoothField

struct SmoothField::Impl {
    std::vector<std::string> coords;
    ScalarField field;
    expr::CompiledField value;

    mutable std::once_flag first_once;
    mutable std::vector<ScalarField> first;
    mutable std::vector<expr::CompiledField> first_code;
    mutable std::once_flag second_once;
    mutable std::vector<expr::CompiledField> second_code; // k <= l, packed

    void build_first() const
    {
        std::call_once(first_once, [this] {
            for (const auto& c : coords) {
                first.push_back(expr::differentiate(field, c));
                first_code.emplace_back(first.back(), coords);
            }
        });
    }

    void build_second() const
    {
        build_first();
        std::call_once(second_once, [this] {
            for (std::size_t k = 0; k < coords.size(); ++k)
                for (std::size_t l = k; l < coords.size(); ++l)
                    second_code.emplace_back(expr::differentiate(first[k], coords[l]), coords);
        });
    }
};

SmoothField::SmoothField() : SmoothField(Chart("scalar", {"_"}), ScalarField::constant(0.0, {"_"})) {}

SmoothField::SmoothField(const Chart& chart, const ScalarField& field)
{
    auto impl = std::make_shared<Impl>();
    impl->coords = chart.coords();
    impl->field = field.with_vars(chart.coords());
    impl->value = expr::CompiledField(impl->field, impl->coords);
    impl_ = std::move(impl);
}

const ScalarField& SmoothField::field() const { return impl_->field; }

double SmoothField::value(std::span<const double> x) const { return impl_->value(x); }

Jet SmoothField::jet(std::span<const double> x, int order) const
{
    const std::size_t n = impl_->coords.size();
    Jet j(n, order, impl_->value(x));
    if (order >= 1) {
        impl_->build_first();
        for (std::size_t k = 0; k < n; ++k)
            j.set_d(k, impl_->first_code[k](x));
    }
    if (order >= 2) {
        impl_->build_second();
        std::size_t s = 0;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k; l < n; ++l)
                j.set_d2(k, l, impl_->second_code[s++](x));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Component fields

namespace detail {

template <class Tag>
ComponentField<Tag>::ComponentField(Chart chart, std::vector<ScalarField> components) : chart_(std::move(chart))
{
    if (components.size() != chart_.dim())
        throw InvalidArgumentError("field on chart '" + chart_.name() + "' needs " + std::to_string(chart_.dim()) +
                                   " components, got " + std::to_string(components.size()));
    for (auto& c : components) {
        components_.push_back(c.with_vars(chart_.coords()));
        smooth_.emplace_back(chart_, components_.back());
    }
}

template <class Tag>
ComponentField<Tag> ComponentField<Tag>::from_procedure(Chart chart, int max_order, Procedure proc)
{
    ComponentField f(std::move(chart));
    f.proc_ = std::move(proc);
    f.max_order_ = max_order;
    return f;
}

template <class Tag>
ComponentField<Tag> ComponentField<Tag>::basis(const Chart& chart, std::size_t i)
{
    std::vector<ScalarField> comps;
    for (std::size_t k = 0; k < chart.dim(); ++k)
        comps.push_back(ScalarField::constant(k == i ? 1.0 : 0.0, chart.coords()));
    return ComponentField(chart, std::move(comps));
}

template <class Tag>
const std::vector<ScalarField>& ComponentField<Tag>::components() const
{
    if (proc_)
        throw InvalidArgumentError("field has no symbolic components (it is evaluated pointwise)");
    return components_;
}

template <class Tag>
ComponentJets ComponentField<Tag>::jets(const Point& p, int order) const
{
    if (order > max_order_)
        throw InvalidArgumentError("field supports derivatives up to order " + std::to_string(max_order_) +
                                   ", requested " + std::to_string(order));
    if (proc_)
        return truncated(proc_(p, order), order);
    const auto x = chart_.coordinates(p);
    ComponentJets out;
    out.reserve(smooth_.size());
    for (const auto& s : smooth_)
        out.push_back(s.jet(x, order));
    return out;
}

template <class Tag>
std::vector<double> ComponentField<Tag>::at(const Point& p) const
{
    return values(jets(p, 0));
}

template class ComponentField<CovectorTag>;
template class ComponentField<VectorTag>;

} // namespace detail

CovectorField differential(const Chart& chart, const ScalarField& f)
{
    const ScalarField g = f.with_vars(chart.coords());
    std::vector<ScalarField> comps;
    for (const auto& c : chart.coords())
        comps.push_back(expr::differentiate(g, c));
    return {chart, std::move(comps)};
}

// ---------------------------------------------------------------------------
// Bivector and cometric

namespace {

std::size_t packed_upper(std::size_t i, std::size_t j, std::size_t n)
{
    // Row-major packing of the upper triangle including the diagonal.
    return i * n - i * (i - 1) / 2 + (j - i);
}

} // namespace

BivectorField::BivectorField(Chart chart) : BivectorField(std::move(chart), {}) {}

BivectorField::BivectorField(Chart chart, const std::vector<Entry>& entries) : chart_(std::move(chart))
{
    const std::size_t n = chart_.dim();
    upper_.assign(n * (n - 1) / 2, ScalarField::constant(0.0, chart_.coords()));
    std::vector<bool> seen(upper_.size(), false);
    for (const auto& e : entries) {
        if (e.i >= n || e.j >= n)
            throw InvalidArgumentError("bivector entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                       ") is outside chart '" + chart_.name() + "'");
        if (e.i >= e.j)
            throw InvalidArgumentError("bivector entries must have i < j, got (" + std::to_string(e.i) + ", " +
                                       std::to_string(e.j) + ")");
        const std::size_t s = slot(e.i, e.j);
        if (seen[s])
            throw InvalidArgumentError("duplicate bivector entry (" + std::to_string(e.i) + ", " +
                                       std::to_string(e.j) + ")");
        seen[s] = true;
        upper_[s] = e.value.with_vars(chart_.coords());
    }
    for (const auto& u : upper_)
        smooth_.emplace_back(chart_, u);
}

std::size_t BivectorField::slot(std::size_t i, std::size_t j) const
{
    const std::size_t n = chart_.dim();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

ScalarField BivectorField::entry(std::size_t i, std::size_t j) const
{
    if (i == j)
        return ScalarField::constant(0.0, chart_.coords());
    if (i < j)
        return upper_[slot(i, j)];
    return -upper_[slot(j, i)];
}

bool BivectorField::is_zero() const
{
    return std::all_of(upper_.begin(), upper_.end(), [](const ScalarField& s) { return s.is_zero(); });
}

std::vector<Jet> BivectorField::jets(std::span<const double> x, int order) const
{
    const std::size_t n = chart_.dim();
    std::vector<Jet> out(n * n, Jet(n, order));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Jet v = smooth_[slot(i, j)].jet(x, order);
            out[j * n + i] = -v;
            out[i * n + j] = std::move(v);
        }
    return out;
}

Cometric::Cometric(Chart chart) : Cometric(std::move(chart), {}) {}

Cometric::Cometric(Chart chart, const std::vector<Entry>& entries) : chart_(std::move(chart))
{
    const std::size_t n = chart_.dim();
    upper_.assign(n * (n + 1) / 2, ScalarField::constant(0.0, chart_.coords()));
    std::vector<bool> seen(upper_.size(), false);
    for (const auto& e : entries) {
        if (e.i >= n || e.j >= n)
            throw InvalidArgumentError("cometric entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                       ") is outside chart '" + chart_.name() + "'");
        if (e.i > e.j)
            throw InvalidArgumentError("cometric entries must have i <= j, got (" + std::to_string(e.i) + ", " +
                                       std::to_string(e.j) + ")");
        const std::size_t s = slot(e.i, e.j);
        if (seen[s])
            throw InvalidArgumentError("duplicate cometric entry (" + std::to_string(e.i) + ", " +
                                       std::to_string(e.j) + ")");
        seen[s] = true;
        upper_[s] = e.value.with_vars(chart_.coords());
    }
    for (const auto& u : upper_)
        smooth_.emplace_back(chart_, u);
}

Cometric Cometric::euclidean(const Chart& chart)
{
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < chart.dim(); ++i)
        entries.push_back({i, i, ScalarField::constant(1.0, chart.coords())});
    return {chart, entries};
}

std::size_t Cometric::slot(std::size_t i, std::size_t j) const { return packed_upper(i, j, chart_.dim()); }

ScalarField Cometric::entry(std::size_t i, std::size_t j) const
{
    return i <= j ? upper_[slot(i, j)] : upper_[slot(j, i)];
}

std::vector<Jet> Cometric::jets(std::span<const double> x, int order) const
{
    const std::size_t n = chart_.dim();
    std::vector<Jet> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Jet v = smooth_[slot(i, j)].jet(x, order);
            out[j * n + i] = v;
            out[i * n + j] = std::move(v);
        }
    return out;
}

PoissonManifold::PoissonManifold(std::string name_, BivectorField pi_, Cometric g_)
    : name(std::move(name_)), chart(pi_.chart()), pi(std::move(pi_)), g(std::move(g_))
{
    require_same_chart(pi.chart(), g.chart(), "manifold");
}

// ---------------------------------------------------------------------------
// Jet linear solves

JetLinearSolver::JetLinearSolver(const std::vector<Jet>& a, std::size_t n, double max_condition) : n_(n), a_(a)
{
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = a[i * n + j].value();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    condition_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(condition_ <= max_condition))
        throw SingularCometricError("cometric matrix is singular or ill-conditioned (condition number " +
                                    std::to_string(condition_) + ")");
    inverse_ = m.inverse();
}

ComponentJets JetLinearSolver::solve(const ComponentJets& b) const
{
    const std::size_t n = n_;
    int order = min_order(b);
    for (const auto& e : a_)
        order = std::min(order, e.order());

    auto apply_inverse = [&](const std::vector<double>& r) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out[i] += inverse_(i, j) * r[j];
        return out;
    };

    ComponentJets x(n, Jet(b.empty() ? n : b[0].dim(), order));
    const std::size_t dim = x[0].dim();

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = b[i].value();
    const auto x0 = apply_inverse(r);
    for (std::size_t i = 0; i < n; ++i)
        x[i].set_value(x0[i]);
    if (order < 1)
        return x;

    // A x = b  =>  A ∂x = ∂b − ∂A x
    std::vector<std::vector<double>> x1(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = b[i].d(m);
            for (std::size_t j = 0; j < n; ++j)
                v -= a_[i * n + j].d(m) * x0[j];
            r[i] = v;
        }
        x1[m] = apply_inverse(r);
        for (std::size_t i = 0; i < n; ++i)
            x[i].set_d(m, x1[m][i]);
    }
    if (order < 2)
        return x;

    // A ∂²x = ∂²b − ∂²A x − ∂_m A ∂_l x − ∂_l A ∂_m x
    for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t l = m; l < dim; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                double v = b[i].d2(m, l);
                for (std::size_t j = 0; j < n; ++j) {
                    const Jet& aij = a_[i * n + j];
                    v -= aij.d2(m, l) * x0[j] + aij.d(m) * x1[l][j] + aij.d(l) * x1[m][j];
                }
                r[i] = v;
            }
            const auto x2 = apply_inverse(r);
            for (std::size_t i = 0; i < n; ++i)
                x[i].set_d2(m, l, x2[i]);
        }
    return x;
}

// ---------------------------------------------------------------------------
// LocalGeometry

LocalGeometry::LocalGeometry(const PoissonManifold& m, const Point& p, int order)
    : n_(m.chart.dim()),
      order_(order),
      point_(p),
      x_(m.chart.coordinates(p)),
      pi_(m.pi.jets(x_, order)),
      g_(m.g.jets(x_, order)),
      solver_(g_, n_)
{
}

ComponentJets LocalGeometry::basis(std::size_t i, int order) const
{
    ComponentJets out(n_, Jet(n_, order));
    out[i].set_value(1.0);
    return out;
}

ComponentJets LocalGeometry::zero(int order) const { return ComponentJets(n_, Jet(n_, order)); }

ComponentJets LocalGeometry::sharp(const ComponentJets& alpha) const
{
    const int order = std::min(min_order(alpha), order_);
    ComponentJets out(n_, Jet(n_, order));
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
            out[k] += alpha[i] * pi(i, k);
    return out;
}

Jet LocalGeometry::derivation(const ComponentJets& x, const Jet& h) const
{
    const int order = std::min(min_order(x), h.order() - 1);
    Jet out(n_, std::max(order, 0));
    for (std::size_t k = 0; k < n_; ++k)
        out += x[k].truncated(order) * h.partial(k);
    return out;
}

ComponentJets LocalGeometry::bracket(const ComponentJets& alpha, const ComponentJets& beta) const
{
    // [α, β]_k = α_i β_j ∂_k Π^{ij} + α_i ♯(dx^i)(β_k) − β_j ♯(dx^j)(α_k)
    const int order = std::min({min_order(alpha) - 1, min_order(beta) - 1, order_ - 1});
    if (order < 0)
        throw InvalidArgumentError("Koszul bracket needs first derivatives of its arguments");
    const ComponentJets sa = sharp(alpha);
    const ComponentJets sb = sharp(beta);
    ComponentJets out(n_, Jet(n_, order));
    for (std::size_t k = 0; k < n_; ++k) {
        Jet v(n_, order);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                v += alpha[i].truncated(order) * beta[j].truncated(order) * pi(i, j).partial(k);
        v += derivation(sa, beta[k]);
        v -= derivation(sb, alpha[k]);
        out[k] = v.truncated(order);
    }
    return out;
}

Jet LocalGeometry::pi_pairing(const ComponentJets& alpha, const ComponentJets& beta) const
{
    const int order = std::min({min_order(alpha), min_order(beta), order_});
    Jet v(n_, order);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            v += alpha[i] * beta[j] * pi(i, j);
    return v;
}

Jet LocalGeometry::g_pairing(const ComponentJets& alpha, const ComponentJets& beta) const
{
    const int order = std::min({min_order(alpha), min_order(beta), order_});
    Jet v(n_, order);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            v += alpha[i] * beta[j] * g(i, j);
    return v;
}

ComponentJets LocalGeometry::j_map(const ComponentJets& alpha) const
{
    // g^{kj} (Jα)_k = Σ_i α_i Π^{ij}
    const int order = std::min(min_order(alpha), order_);
    ComponentJets rhs(n_, Jet(n_, order));
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i)
            rhs[j] += alpha[i] * pi(i, j);
    return solver_.solve(rhs);
}

// ---------------------------------------------------------------------------
// Field-level operations

VectorField sharp(const BivectorField& pi, const CovectorField& alpha)
{
    require_same_chart(pi.chart(), alpha.chart(), "sharp");
    const Chart& chart = pi.chart();
    const std::size_t n = chart.dim();
    if (alpha.is_symbolic()) {
        std::vector<ScalarField> comps;
        for (std::size_t k = 0; k < n; ++k) {
            ScalarField v = ScalarField::constant(0.0, chart.coords());
            for (std::size_t i = 0; i < n; ++i)
                v = v + alpha.components()[i] * pi.entry(i, k);
            comps.push_back(v);
        }
        return {chart, std::move(comps)};
    }
    return VectorField::from_procedure(chart, alpha.max_order(), [pi, alpha](const Point& p, int order) {
        const auto x = pi.chart().coordinates(p);
        const auto a = alpha.jets(p, order);
        const auto m = pi.jets(x, order);
        const std::size_t n = a.size();
        ComponentJets out(n, Jet(n, order));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                out[k] += a[i] * m[i * n + k];
        return out;
    });
}

CovectorField j_endomorphism(const BivectorField& pi, const Cometric& g, const CovectorField& alpha)
{
    require_same_chart(pi.chart(), alpha.chart(), "j_endomorphism");
    require_same_chart(g.chart(), alpha.chart(), "j_endomorphism");
    PoissonManifold m("j", pi, g);
    return CovectorField::from_procedure(pi.chart(), alpha.max_order(), [m, alpha](const Point& p, int order) {
        LocalGeometry local(m, p, order);
        return local.j_map(alpha.jets(p, order));
    });
}

CovectorField koszul_bracket(const BivectorField& pi, const CovectorField& alpha, const CovectorField& beta)
{
    require_same_chart(pi.chart(), alpha.chart(), "koszul_bracket");
    require_same_chart(pi.chart(), beta.chart(), "koszul_bracket");
    const Chart& chart = pi.chart();
    const std::size_t n = chart.dim();
    if (alpha.is_symbolic() && beta.is_symbolic()) {
        const auto& a = alpha.components();
        const auto& b = beta.components();
        const VectorField sa = sharp(pi, alpha);
        const VectorField sb = sharp(pi, beta);
        std::vector<ScalarField> comps;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& xk = chart.coords()[k];
            ScalarField v = ScalarField::constant(0.0, chart.coords());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const ScalarField dpi = expr::differentiate(pi.entry(i, j), xk);
                    if (!dpi.is_zero())
                        v = v + (a[i] * b[j] - a[j] * b[i]) * dpi;
                }
            for (std::size_t l = 0; l < n; ++l) {
                const auto& xl = chart.coords()[l];
                v = v + sa.components()[l] * expr::differentiate(b[k], xl);
                v = v - sb.components()[l] * expr::differentiate(a[k], xl);
            }
            comps.push_back(v);
        }
        return {chart, std::move(comps)};
    }
    const int max_order = std::min(alpha.max_order(), beta.max_order()) - 1;
    if (max_order < 0)
        throw InvalidArgumentError("koszul_bracket needs differentiable arguments");
    PoissonManifold m("bracket", pi, Cometric::euclidean(chart));
    return CovectorField::from_procedure(chart, max_order, [m, alpha, beta](const Point& p, int order) {
        LocalGeometry local(m, p, order + 1);
        return local.bracket(alpha.jets(p, order + 1), beta.jets(p, order + 1));
    });
}

CovectorField lie_derivative(const VectorField& x, const CovectorField& beta)
{
    require_same_chart(x.chart(), beta.chart(), "lie_derivative");
    const Chart& chart = x.chart();
    const auto& X = x.components();
    const auto& b = beta.components();
    const std::size_t n = chart.dim();
    std::vector<ScalarField> comps;
    for (std::size_t j = 0; j < n; ++j) {
        ScalarField v = ScalarField::constant(0.0, chart.coords());
        for (std::size_t k = 0; k < n; ++k) {
            v = v + X[k] * expr::differentiate(b[j], chart.coords()[k]);
            v = v + b[k] * expr::differentiate(X[k], chart.coords()[j]);
        }
        comps.push_back(v);
    }
    return {chart, std::move(comps)};
}

ScalarField pairing(const BivectorField& pi, const CovectorField& alpha, const CovectorField& beta)
{
    require_same_chart(pi.chart(), alpha.chart(), "pairing");
    require_same_chart(pi.chart(), beta.chart(), "pairing");
    const auto& a = alpha.components();
    const auto& b = beta.components();
    const std::size_t n = pi.dim();
    ScalarField v = ScalarField::constant(0.0, pi.chart().coords());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            v = v + a[i] * b[j] * pi.entry(i, j);
    return v;
}

CovectorField koszul_bracket_by_definition(const BivectorField& pi, const CovectorField& alpha,
                                           const CovectorField& beta)
{
    const CovectorField la = lie_derivative(sharp(pi, alpha), beta);
    const CovectorField lb = lie_derivative(sharp(pi, beta), alpha);
    const CovectorField dp = differential(pi.chart(), pairing(pi, alpha, beta));
    std::vector<ScalarField> comps;
    for (std::size_t k = 0; k < pi.dim(); ++k)
        comps.push_back(la.components()[k] - lb.components()[k] - dp.components()[k]);
    return {pi.chart(), std::move(comps)};
}

VectorField commutator(const VectorField& x, const VectorField& y)
{
    require_same_chart(x.chart(), y.chart(), "commutator");
    const Chart& chart = x.chart();
    const auto& X = x.components();
    const auto& Y = y.components();
    const std::size_t n = chart.dim();
    std::vector<ScalarField> comps;
    for (std::size_t k = 0; k < n; ++k) {
        ScalarField v = ScalarField::constant(0.0, chart.coords());
        for (std::size_t j = 0; j < n; ++j) {
            v = v + X[j] * expr::differentiate(Y[k], chart.coords()[j]);
            v = v - Y[j] * expr::differentiate(X[k], chart.coords()[j]);
        }
        comps.push_back(v);
    }
    return {chart, std::move(comps)};
}

std::vector<double> jacobi_residual(const BivectorField& pi, const Point& p)
{
    const std::size_t n = pi.dim();
    const auto x = pi.chart().coordinates(p);
    const auto m = pi.jets(x, 1);
    auto at = [&](std::size_t i, std::size_t j) -> const Jet& { return m[i * n + j]; };
    std::vector<double> out(n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double v = 0.0;
                for (std::size_t l = 0; l < n; ++l)
                    v += at(l, i).value() * at(j, k).d(l) + at(l, j).value() * at(k, i).d(l) +
                         at(l, k).value() * at(i, j).d(l);
                out[(i * n + j) * n + k] = v;
            }
    return out;
}

CasimirResult is_casimir(const BivectorField& pi, const ScalarField& f, std::span<const Point> points, double tol)
{
    const VectorField s = sharp(pi, differential(pi.chart(), f));
    CasimirResult r;
    for (const auto& p : points)
        for (double v : s.at(p))
            r.max_residual = std::max(r.max_residual, std::abs(v));
    r.is_casimir = r.max_residual <= tol;
    return r;
}

} // namespace pw
