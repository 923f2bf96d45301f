#pragma once

// Contravariant Levi-Civita connection of (Π, g) and the objects built on it.
//
// Γ^{ij}_k is defined by D_{dx^i} dx^j = Γ^{ij}_k dx^k. At a point it comes from
// the six-term Koszul formula with α, β, γ = dx^i, dx^j, dx^k, followed by a
// solve against [g^{kl}]. Traces over "an orthonormal coframe" are taken with
// the inverse cometric g̃_{kl}, which carries the signature signs.

#include "pw/geometry.hpp"

#include <array>
#include <vector>

namespace pw {

/// Everything the connection needs at one point, with Γ carried as order-1 jets
/// so that one extra derivative (for curvature and the Laplacian) is available.
class LocalConnection {
public:
    LocalConnection(const PoissonManifold& m, const Point& p);

    const LocalGeometry& geometry() const noexcept { return geo_; }
    std::size_t dim() const noexcept { return n_; }

    const Jet& gamma(std::size_t i, std::size_t j, std::size_t k) const { return gamma_[(i * n_ + j) * n_ + k]; }
    /// Γ values, row-major n³.
    std::vector<double> gamma_values() const;

    /// D_α β. The result has order min(order α, order β − 1, 1).
    ComponentJets apply(const ComponentJets& alpha, const ComponentJets& beta) const;

    /// R(α,β)γ = D_α D_β γ − D_β D_α γ − D_{[α,β]} γ at the point. Needs α, β of
    /// order ≥ 1 and γ of order 2.
    std::vector<double> curvature(const ComponentJets& alpha, const ComponentJets& beta,
                                  const ComponentJets& gamma) const;

    /// R^{ijk}_l with R(dx^i, dx^j) dx^k = R^{ijk}_l dx^l, row-major n⁴.
    const std::vector<double>& curvature_tensor() const;

    /// Ric(α, β) = Σ g̃_{kl} g(R(α, dx^k) dx^l, β).
    double ricci(std::span<const double> alpha, std::span<const double> beta) const;
    /// Ric(dx^i, dx^j), row-major n².
    std::vector<double> ricci_matrix() const;
    /// S = Σ g̃_{ij} Ric(dx^i, dx^j).
    double scalar() const;

    /// Δ(f) = Σ g̃_{kl} g(D_{dx^k}(J df), dx^l). `f` must be an order-2 jet.
    double laplacian(const Jet& f) const;
    /// H^f(α, β) = −g(D_α(J df), β).
    double hessian(const Jet& f, std::span<const double> alpha, std::span<const double> beta) const;

    /// (D_{dx^i} Π)(dx^j, dx^k), row-major n³.
    std::vector<double> compatibility_residual() const;

    /// Γ^{ij}_k − Γ^{ji}_k − ∂_k Π^{ij}, row-major n³.
    std::vector<double> torsion_residual() const { return torsion_residual(gamma_values()); }
    /// ♯(dx^i) g^{jk} − Σ_l (Γ^{ij}_l g^{lk} + Γ^{ik}_l g^{jl}), row-major n³.
    std::vector<double> metric_residual() const { return metric_residual(gamma_values()); }
    /// The same residuals for arbitrary coefficients at this point.
    std::vector<double> torsion_residual(std::span<const double> gamma) const;
    std::vector<double> metric_residual(std::span<const double> gamma) const;

private:
    std::size_t n_;
    LocalGeometry geo_;
    std::vector<Jet> gamma_;
    mutable std::vector<double> riemann_;
};

/// Connection coefficients of (Π, g), evaluated on demand.
class ConnectionCoefficients {
public:
    explicit ConnectionCoefficients(PoissonManifold m) : m_(std::move(m)) {}

    const PoissonManifold& manifold() const noexcept { return m_; }
    const Chart& chart() const noexcept { return m_.chart; }

    LocalConnection at(const Point& p) const { return {m_, p}; }
    /// Γ^{ij}_k(p), row-major n³.
    std::vector<double> gamma(const Point& p) const { return at(p).gamma_values(); }

private:
    PoissonManifold m_;
};

ConnectionCoefficients levi_civita(const BivectorField& pi, const Cometric& g);

/// D_α β as a pointwise-evaluated 1-form.
CovectorField apply_connection(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta);

/// R(α,β)γ as a pointwise-evaluated 1-form (values only).
CovectorField curvature(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta,
                        const CovectorField& gamma);

struct CurvatureAtPoint {
    Point point;
    std::size_t dim = 0;
    std::vector<double> components; // R^{ijk}_l, row-major n⁴

    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
    {
        return components[((i * dim + j) * dim + k) * dim + l];
    }
};

CurvatureAtPoint curvature_at(const ConnectionCoefficients& d, const Point& p);

double ricci(const ConnectionCoefficients& d, const CovectorField& alpha, const CovectorField& beta, const Point& p);
double scalar_curvature(const ConnectionCoefficients& d, const Point& p);
double laplacian(const ConnectionCoefficients& d, const ScalarField& f, const Point& p);
double hessian(const ConnectionCoefficients& d, const ScalarField& f, const CovectorField& alpha,
               const CovectorField& beta, const Point& p);
std::vector<double> compatibility_residual(const ConnectionCoefficients& d, const Point& p);

/// Jet of f at p on the manifold's chart.
Jet scalar_jet(const Chart& chart, const ScalarField& f, const Point& p, int order);

} // namespace pw
