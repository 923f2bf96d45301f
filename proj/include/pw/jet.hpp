#pragma once

// Truncated Taylor data of a scalar at one chart point: value, gradient and
// Hessian with respect to the chart coordinates. Order 0, 1 or 2 says how much
// of that data is present. Arithmetic truncates to the lower operand order, and
// taking a partial derivative drops one order.

#include <cstddef>
#include <vector>

namespace pw {

class Jet {
public:
    static constexpr int kMaxOrder = 2;

    Jet() = default;
    Jet(std::size_t dim, int order, double value = 0.0);

    /// Jet of the coordinate function x^k.
    static Jet coordinate(std::size_t dim, int order, std::size_t k, double value);

    std::size_t dim() const noexcept { return dim_; }
    int order() const noexcept { return order_; }

    double value() const noexcept { return value_; }
    double d(std::size_t k) const { return grad_[k]; }
    double d2(std::size_t k, std::size_t l) const { return hess_[k * dim_ + l]; }

    void set_value(double v) noexcept { value_ = v; }
    void set_d(std::size_t k, double v) { grad_[k] = v; }
    void set_d2(std::size_t k, std::size_t l, double v)
    {
        hess_[k * dim_ + l] = v;
        hess_[l * dim_ + k] = v;
    }

    Jet truncated(int order) const;
    Jet partial(std::size_t k) const;

    /// Re-indexes into a chart of dimension `dim` whose coordinates
    /// `offset .. offset+this->dim()-1` are this jet's coordinates. Derivatives
    /// along the other coordinates are zero.
    Jet embedded(std::size_t dim, std::size_t offset) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    /// Chain rule for a univariate function given its first two derivatives
    /// at this jet's value.
    Jet compose(double f0, double f1, double f2) const;

private:
    std::size_t dim_ = 0;
    int order_ = 0;
    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_;
};

Jet reciprocal(const Jet& a);

/// Components of a 1-form (or vector field) as jets at one point.
using ComponentJets = std::vector<Jet>;

/// Lowest order among the entries.
int min_order(const ComponentJets& v);
ComponentJets truncated(const ComponentJets& v, int order);
std::vector<double> values(const ComponentJets& v);

} // namespace pw
