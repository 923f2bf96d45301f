#include "pw/connection.hpp"

namespace pw {

LocalConnection::LocalConnection(const PoissonManifold& m, const Point& p)
    : n_(m.chart.dim()), geo_(m, p, Jet::kMaxOrder)
{
    const std::size_t n = n_;
    const auto& G = geo_;
    // ∂_l g^{ab} and ∂_l Π^{ab} as order-1 jets.
    std::vector<Jet> dg(n * n * n), dpi(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t l = 0; l < n; ++l) {
                dg[(a * n + b) * n + l] = G.g(a, b).partial(l);
                dpi[(a * n + b) * n + l] = G.pi(a, b).partial(l);
            }
    auto DG = [&](std::size_t a, std::size_t b, std::size_t l) -> const Jet& { return dg[(a * n + b) * n + l]; };
    auto DP = [&](std::size_t a, std::size_t b, std::size_t l) -> const Jet& { return dpi[(a * n + b) * n + l]; };
    auto P = [&](std::size_t a, std::size_t b) { return G.pi(a, b).truncated(1); };
    auto g = [&](std::size_t a, std::size_t b) { return G.g(a, b).truncated(1); };

    gamma_.assign(n * n * n, Jet(n, 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ComponentJets rhs(n, Jet(n, 1));
            for (std::size_t k = 0; k < n; ++k) {
                Jet v(n, 1);
                for (std::size_t l = 0; l < n; ++l) {
                    v += P(i, l) * DG(j, k, l);
                    v += P(j, l) * DG(i, k, l);
                    v -= P(k, l) * DG(i, j, l);
                    v += DP(i, j, l) * g(l, k);
                    v -= DP(j, k, l) * g(l, i);
                    v += DP(k, i, l) * g(l, j);
                }
                rhs[k] = 0.5 * v;
            }
            const ComponentJets c = G.solver().solve(rhs);
            for (std::size_t k = 0; k < n; ++k)
                gamma_[(i * n + j) * n + k] = c[k];
        }
}

std::vector<double> LocalConnection::gamma_values() const
{
    std::vector<double> out;
    out.reserve(gamma_.size());
    for (const auto& j : gamma_)
        out.push_back(j.value());
    return out;
}

ComponentJets LocalConnection::apply(const ComponentJets& alpha, const ComponentJets& beta) const
{
    const int order = std::min({min_order(alpha), min_order(beta) - 1, 1});
    if (order < 0)
        throw InvalidArgumentError("D_α β needs the first derivatives of β");
    const std::size_t n = n_;
    ComponentJets out(n, Jet(n, order));
    for (std::size_t i = 0; i < n; ++i) {
        const Jet a = alpha[i].truncated(order);
        for (std::size_t k = 0; k < n; ++k) {
            // ♯(dx^i)(β_k) + β_j Γ^{ij}_k
            Jet v(n, order);
            for (std::size_t l = 0; l < n; ++l)
                v += geo_.pi(i, l).truncated(order) * beta[k].partial(l).truncated(order);
            for (std::size_t j = 0; j < n; ++j)
                v += beta[j].truncated(order) * gamma(i, j, k).truncated(order);
            out[k] += a * v;
        }
    }
    return out;
}

std::vector<double> LocalConnection::curvature(const ComponentJets& alpha, const ComponentJets& beta,
                                               const ComponentJets& gamma) const
{
    const ComponentJets dag = apply(alpha, apply(beta, gamma));
    const ComponentJets dbg = apply(beta, apply(alpha, gamma));
    const ComponentJets dcg = apply(geo_.bracket(alpha, beta), gamma);
    std::vector<double> out(n_);
    for (std::size_t l = 0; l < n_; ++l)
        out[l] = dag[l].value() - dbg[l].value() - dcg[l].value();
    return out;
}

const std::vector<double>& LocalConnection::curvature_tensor() const
{
    if (!riemann_.empty())
        return riemann_;
    const std::size_t n = n_;
    std::vector<double> r(n * n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto v = curvature(geo_.basis(i), geo_.basis(j), geo_.basis(k));
                for (std::size_t l = 0; l < n; ++l) {
                    r[((i * n + j) * n + k) * n + l] = v[l];
                    r[((j * n + i) * n + k) * n + l] = -v[l];
                }
            }
    riemann_ = std::move(r);
    return riemann_;
}

double LocalConnection::ricci(std::span<const double> alpha, std::span<const double> beta) const
{
    const std::size_t n = n_;
    const auto& r = curvature_tensor();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            const double gt = geo_.metric(k, l);
            if (gt == 0.0)
                continue;
            // g(R(α, dx^k) dx^l, β)
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (alpha[i] == 0.0)
                    continue;
                for (std::size_t m = 0; m < n; ++m) {
                    const double rm = r[((i * n + k) * n + l) * n + m];
                    if (rm == 0.0)
                        continue;
                    for (std::size_t q = 0; q < n; ++q)
                        v += alpha[i] * rm * geo_.g(m, q).value() * beta[q];
                }
            }
            sum += gt * v;
        }
    return sum;
}

std::vector<double> LocalConnection::ricci_matrix() const
{
    const std::size_t n = n_;
    std::vector<double> out(n * n);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(a.begin(), a.end(), 0.0);
            std::fill(b.begin(), b.end(), 0.0);
            a[i] = 1.0;
            b[j] = 1.0;
            out[i * n + j] = ricci(a, b);
        }
    return out;
}

double LocalConnection::scalar() const
{
    const auto ric = ricci_matrix();
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            s += geo_.metric(i, j) * ric[i * n_ + j];
    return s;
}

namespace {

ComponentJets differential_jets(const Jet& f)
{
    ComponentJets df;
    for (std::size_t k = 0; k < f.dim(); ++k)
        df.push_back(f.partial(k));
    return df;
}

ComponentJets constant_jets(std::span<const double> v, std::size_t dim)
{
    ComponentJets out;
    for (double x : v)
        out.emplace_back(dim, 0, x);
    return out;
}

} // namespace

double LocalConnection::laplacian(const Jet& f) const
{
    if (f.order() < 2)
        throw InvalidArgumentError("the Laplacian needs a second-order jet");
    const std::size_t n = n_;
    const ComponentJets jdf = geo_.j_map(differential_jets(f));
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const ComponentJets d = apply(geo_.basis(k, 0), jdf);
        for (std::size_t l = 0; l < n; ++l) {
            double v = 0.0;
            for (std::size_t m = 0; m < n; ++m)
                v += d[m].value() * geo_.g(m, l).value();
            sum += geo_.metric(k, l) * v;
        }
    }
    return sum;
}

double LocalConnection::hessian(const Jet& f, std::span<const double> alpha, std::span<const double> beta) const
{
    if (f.order() < 2)
        throw InvalidArgumentError("the Hessian needs a second-order jet");
    const ComponentJets jdf = geo_.j_map(differential_jets(f));
    const ComponentJets d = apply(constant_jets(alpha, n_), jdf);
    double v = 0.0;
    for (std::size_t m = 0; m < n_; ++m)
        for (std::size_t q = 0; q < n_; ++q)
            v += d[m].value() * geo_.g(m, q).value() * beta[q];
    return -v;
}

std::vector<double> LocalConnection::compatibility_residual() const
{
    const std::size_t n = n_;
    std::vector<double> out(n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double v = 0.0;
                for (std::size_t l = 0; l < n; ++l)
                    v += geo_.pi(i, l).value() * geo_.pi(j, k).d(l);
                for (std::size_t m = 0; m < n; ++m)
                    v -= gamma(i, j, m).value() * geo_.pi(m, k).value() +
                         gamma(i, k, m).value() * geo_.pi(j, m).value();
                out[(i * n + j) * n + k] = v;
            }
    return out;
}

std::vector<double> LocalConnection::torsion_residual(std::span<const double> gamma) const
{
    const std::size_t n = n_;
    std::vector<double> out(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                out[(i * n + j) * n + k] =
                    gamma[(i * n + j) * n + k] - gamma[(j * n + i) * n + k] - geo_.pi(i, j).d(k);
    return out;
}

std::vector<double> LocalConnection::metric_residual(std::span<const double> gamma) const
{
    const std::size_t n = n_;
    std::vector<double> out(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double v = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    v += geo_.pi(i, l).value() * geo_.g(j, k).d(l);
                    v -= gamma[(i * n + j) * n + l] * geo_.g(l, k).value();
                    v -= gamma[(i * n + k) * n + l] * geo_.g(j, l).value();
                }
                out[(i * n + j) * n + k] = v;
            }
    return out;
}

// ---------------------------------------------------------------------------

ConnectionCoefficients levi_civita(const BivectorField& pi, const Cometric& g)
{
    return ConnectionCoefficients(PoissonManifold("", pi, g));
}

CovectorField apply_connection(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta)
{
    require_same_chart(d.chart(), alpha.chart(), "apply_connection");
    require_same_chart(d.chart(), beta.chart(), "apply_connection");
    const int max_order = std::min({alpha.max_order(), beta.max_order() - 1, 1});
    if (max_order < 0)
        throw InvalidArgumentError("apply_connection needs a differentiable second argument");
    return CovectorField::from_procedure(d.chart(), max_order, [d, alpha, beta](const Point& p, int order) {
        const LocalConnection c = d.at(p);
        return c.apply(alpha.jets(p, order), beta.jets(p, order + 1));
    });
}

CovectorField curvature(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta,
                        const CovectorField& gamma)
{
    require_same_chart(d.chart(), alpha.chart(), "curvature");
    require_same_chart(d.chart(), beta.chart(), "curvature");
    require_same_chart(d.chart(), gamma.chart(), "curvature");
    if (alpha.max_order() < 1 || beta.max_order() < 1 || gamma.max_order() < 2)
        throw InvalidArgumentError("curvature needs differentiable arguments");
    return CovectorField::from_procedure(d.chart(), 0, [d, alpha, beta, gamma](const Point& p, int) {
        const LocalConnection c = d.at(p);
        const auto v = c.curvature(alpha.jets(p, 1), beta.jets(p, 1), gamma.jets(p, 2));
        return constant_jets(v, v.size());
    });
}

CurvatureAtPoint curvature_at(const ConnectionCoefficients& d, const Point& p)
{
    const LocalConnection c = d.at(p);
    return {p, c.dim(), c.curvature_tensor()};
}

double ricci(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta, const Point& p)
{
    require_same_chart(d.chart(), alpha.chart(), "ricci");
    require_same_chart(d.chart(), beta.chart(), "ricci");
    return d.at(p).ricci(alpha.at(p), beta.at(p));
}

double scalar_curvature(const ConnectionCoefficients& d, const Point& p) { return d.at(p).scalar(); }

Jet scalar_jet(const Chart& chart, const ScalarField& f, const Point& p, int order)
{
    return SmoothField(chart, f).jet(chart.coordinates(p), order);
}

double laplacian(const ConnectionCoefficients& d, const ScalarField& f, const Point& p)
{
    return d.at(p).laplacian(scalar_jet(d.chart(), f, p, 2));
}

double hessian(const ConnectionCoefficients& d, const ScalarField& f, const CovectorField& alpha,
               const CovectorField& beta, const Point& p)
{
    require_same_chart(d.chart(), alpha.chart(), "hessian");
    require_same_chart(d.chart(), beta.chart(), "hessian");
    return d.at(p).hessian(scalar_jet(d.chart(), f, p, 2), alpha.at(p), beta.at(p));
}

std::vector<double> compatibility_residual(const ConnectionCoefficients& d, const Point& p)
{
    return d.at(p).compatibility_residual();
}

} // namespace pw
