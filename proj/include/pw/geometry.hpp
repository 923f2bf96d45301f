#pragma once

// Charts, tensor fields in the coordinate (co)frame, and the Poisson-side
// operations: sharp map, field endomorphism J, Koszul bracket on 1-forms,
// Jacobi residual and the Casimir test.

#include "pw/error.hpp"
#include "pw/expr.hpp"
#include "pw/jet.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pw {

using expr::Point;
using expr::ScalarField;

class Chart {
public:
    Chart(std::string name, std::vector<std::string> coords);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }

    bool contains(std::string_view coord) const;
    std::size_t index_of(std::string_view coord) const;

    /// Coordinate values of `p` in chart order; extra entries are ignored.
    std::vector<double> coordinates(const Point& p) const;
    Point point(std::span<const double> x) const;

    /// Charts are interchangeable when their coordinate lists agree.
    friend bool operator==(const Chart& a, const Chart& b) { return a.coords_ == b.coords_; }

private:
    std::string name_;
    std::vector<std::string> coords_;
};

void require_same_chart(const Chart& a, const Chart& b, const char* what);

/// A scalar field bound to a chart, with its first and second partial
/// derivatives built (once, lazily) and compiled for point evaluation.
class SmoothField {
public:
    SmoothField();
    SmoothField(const Chart& chart, const ScalarField& field);

    const ScalarField& field() const;
    double value(std::span<const double> x) const;
    Jet jet(std::span<const double> x, int order) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

namespace detail {

struct CovectorTag {};
struct VectorTag {};

/// Components in the coordinate (co)frame, either as symbolic scalar fields
/// or as a procedure producing jets at a point.
template <class Tag>
class ComponentField {
public:
    using Procedure = std::function<ComponentJets(const Point&, int order)>;

    ComponentField(Chart chart, std::vector<ScalarField> components);
    static ComponentField from_procedure(Chart chart, int max_order, Procedure proc);
    /// Basis element dx^i (or d/dx^i).
    static ComponentField basis(const Chart& chart, std::size_t i);

    const Chart& chart() const noexcept { return chart_; }
    std::size_t dim() const noexcept { return chart_.dim(); }

    bool is_symbolic() const noexcept { return !proc_; }
    const std::vector<ScalarField>& components() const;
    int max_order() const noexcept { return max_order_; }

    ComponentJets jets(const Point& p, int order) const;
    std::vector<double> at(const Point& p) const;

private:
    ComponentField(Chart chart) : chart_(std::move(chart)) {}

    Chart chart_;
    std::vector<ScalarField> components_;
    std::vector<SmoothField> smooth_;
    Procedure proc_;
    int max_order_ = Jet::kMaxOrder;
};

} // namespace detail

using CovectorField = detail::ComponentField<detail::CovectorTag>;
using VectorField = detail::ComponentField<detail::VectorTag>;

/// df as a symbolic 1-form.
CovectorField differential(const Chart& chart, const ScalarField& f);

/// Antisymmetric matrix field Π^{ij} = Π(dx^i, dx^j); only i < j is stored.
class BivectorField {
public:
    struct Entry {
        std::size_t i;
        std::size_t j;
        ScalarField value;
    };

    explicit BivectorField(Chart chart);
    /// Entries must have i < j; missing entries are zero.
    BivectorField(Chart chart, const std::vector<Entry>& entries);

    const Chart& chart() const noexcept { return chart_; }
    std::size_t dim() const noexcept { return chart_.dim(); }
    ScalarField entry(std::size_t i, std::size_t j) const;
    bool is_zero() const;

    /// n×n row-major jets of Π^{ij} at coordinates x.
    std::vector<Jet> jets(std::span<const double> x, int order) const;

private:
    std::size_t slot(std::size_t i, std::size_t j) const;

    Chart chart_;
    std::vector<ScalarField> upper_;
    std::vector<SmoothField> smooth_;
};

/// Symmetric matrix field g^{ij} = g(dx^i, dx^j); only i <= j is stored.
class Cometric {
public:
    struct Entry {
        std::size_t i;
        std::size_t j;
        ScalarField value;
    };

    explicit Cometric(Chart chart);
    Cometric(Chart chart, const std::vector<Entry>& entries);
    /// Identity matrix (Euclidean cometric).
    static Cometric euclidean(const Chart& chart);

    const Chart& chart() const noexcept { return chart_; }
    std::size_t dim() const noexcept { return chart_.dim(); }
    ScalarField entry(std::size_t i, std::size_t j) const;

    std::vector<Jet> jets(std::span<const double> x, int order) const;

private:
    std::size_t slot(std::size_t i, std::size_t j) const;

    Chart chart_;
    std::vector<ScalarField> upper_;
    std::vector<SmoothField> smooth_;
};

/// A chart carrying a bivector field and a cometric.
struct PoissonManifold {
    PoissonManifold(std::string name, BivectorField pi, Cometric g);

    std::string name;
    Chart chart;
    BivectorField pi;
    Cometric g;
};

/// Cometric condition numbers above this are treated as singular.
inline constexpr double kMaxCometricCondition = 1e12;

/// Solves A x = b for jet-valued A and b, factoring the value matrix once.
class JetLinearSolver {
public:
    /// `a` is n×n row-major. Throws SingularCometricError when the value
    /// matrix is singular or its condition number exceeds `max_condition`.
    JetLinearSolver(const std::vector<Jet>& a, std::size_t n, double max_condition = kMaxCometricCondition);

    ComponentJets solve(const ComponentJets& b) const;
    const Eigen::MatrixXd& inverse() const noexcept { return inverse_; }
    double condition() const noexcept { return condition_; }

private:
    std::size_t n_;
    std::vector<Jet> a_;
    Eigen::MatrixXd inverse_;
    double condition_ = 1.0;
};

/// Π and g (with derivatives) evaluated at one point, plus the pointwise
/// operations that need only those: sharp map, Koszul bracket, J, pairings.
/// Covector arguments are jets at the same point; results carry the highest
/// order the inputs allow.
class LocalGeometry {
public:
    LocalGeometry(const PoissonManifold& m, const Point& p, int order = Jet::kMaxOrder);

    std::size_t dim() const noexcept { return n_; }
    int order() const noexcept { return order_; }
    const std::vector<double>& x() const noexcept { return x_; }
    const Point& point() const noexcept { return point_; }

    const Jet& pi(std::size_t i, std::size_t j) const { return pi_[i * n_ + j]; }
    const Jet& g(std::size_t i, std::size_t j) const { return g_[i * n_ + j]; }
    /// Metric components: entries of the inverse of [g^{ij}(p)].
    double metric(std::size_t i, std::size_t j) const { return solver_.inverse()(i, j); }
    double cometric_condition() const noexcept { return solver_.condition(); }
    const JetLinearSolver& solver() const noexcept { return solver_; }

    /// dx^i as a constant jet vector.
    ComponentJets basis(std::size_t i, int order = Jet::kMaxOrder) const;
    ComponentJets zero(int order = Jet::kMaxOrder) const;

    ComponentJets sharp(const ComponentJets& alpha) const;
    /// X(h) = X^k ∂_k h.
    Jet derivation(const ComponentJets& x, const Jet& h) const;
    ComponentJets bracket(const ComponentJets& alpha, const ComponentJets& beta) const;
    Jet pi_pairing(const ComponentJets& alpha, const ComponentJets& beta) const;
    Jet g_pairing(const ComponentJets& alpha, const ComponentJets& beta) const;
    ComponentJets j_map(const ComponentJets& alpha) const;

private:
    std::size_t n_;
    int order_;
    Point point_;
    std::vector<double> x_;
    std::vector<Jet> pi_;
    std::vector<Jet> g_;
    JetLinearSolver solver_;
};

/// X^k = Σ_i α_i Π^{ik}.
VectorField sharp(const BivectorField& pi, const CovectorField& alpha);

/// The 1-form Jα with g(Jα, β) = Π(α, β), solved pointwise.
CovectorField j_endomorphism(const BivectorField& pi, const Cometric& g, const CovectorField& alpha);

/// Koszul bracket from the coordinate rules [dx^i, dx^j] = dΠ^{ij} plus the
/// Leibniz rules in each slot.
CovectorField koszul_bracket(const BivectorField& pi, const CovectorField& alpha, const CovectorField& beta);

/// (L_X β)_j = X^k ∂_k β_j + β_k ∂_j X^k, symbolic inputs only.
CovectorField lie_derivative(const VectorField& x, const CovectorField& beta);

/// Koszul bracket straight from L_{♯α} β − L_{♯β} α − d(Π(α, β)).
CovectorField koszul_bracket_by_definition(const BivectorField& pi, const CovectorField& alpha,
                                           const CovectorField& beta);

/// Commutator of symbolic vector fields.
VectorField commutator(const VectorField& x, const VectorField& y);

/// Π(α, β) as a symbolic scalar field.
ScalarField pairing(const BivectorField& pi, const CovectorField& alpha, const CovectorField& beta);

/// J^{ijk} = Σ_l Π^{li} ∂_l Π^{jk} + Π^{lj} ∂_l Π^{ki} + Π^{lk} ∂_l Π^{ij}, as a
/// row-major n³ array. Π is Poisson near p iff every entry vanishes.
std::vector<double> jacobi_residual(const BivectorField& pi, const Point& p);

struct CasimirResult {
    bool is_casimir = false;
    double max_residual = 0.0;
};

/// Casimir test: sup-norm of ♯_Π(df) over the sample points.
CasimirResult is_casimir(const BivectorField& pi, const ScalarField& f, std::span<const Point> points, double tol);

} // namespace pw
