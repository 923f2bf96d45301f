#include "pw/jet.hpp"

#include "pw/error.hpp"

#include <algorithm>
#include <limits>

namespace pw {

Jet::Jet(std::size_t dim, int order, double value) : dim_(dim), order_(order), value_(value)
{
    if (order < 0 || order > kMaxOrder)
        throw InvalidArgumentError("jet order must be between 0 and 2");
    if (order >= 1)
        grad_.assign(dim, 0.0);
    if (order >= 2)
        hess_.assign(dim * dim, 0.0);
}

Jet Jet::coordinate(std::size_t dim, int order, std::size_t k, double value)
{
    Jet j(dim, order, value);
    if (order >= 1)
        j.grad_[k] = 1.0;
    return j;
}

Jet Jet::truncated(int order) const
{
    if (order >= order_)
        return *this;
    Jet j = *this;
    j.order_ = std::max(order, 0);
    if (j.order_ < 2)
        j.hess_.clear();
    if (j.order_ < 1)
        j.grad_.clear();
    return j;
}

Jet Jet::partial(std::size_t k) const
{
    if (order_ < 1)
        throw InvalidArgumentError("cannot differentiate an order-0 jet");
    Jet j(dim_, order_ - 1, grad_[k]);
    if (order_ == 2)
        for (std::size_t l = 0; l < dim_; ++l)
            j.grad_[l] = hess_[k * dim_ + l];
    return j;
}

Jet Jet::embedded(std::size_t dim, std::size_t offset) const
{
    Jet j(dim, order_, value_);
    for (std::size_t a = 0; a < grad_.size(); ++a)
        j.grad_[offset + a] = grad_[a];
    if (order_ == 2)
        for (std::size_t a = 0; a < dim_; ++a)
            for (std::size_t b = 0; b < dim_; ++b)
                j.hess_[(offset + a) * dim + offset + b] = hess_[a * dim_ + b];
    return j;
}

Jet& Jet::operator+=(const Jet& o)
{
    if (o.order_ < order_)
        *this = truncated(o.order_);
    value_ += o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i)
        grad_[i] += o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i)
        hess_[i] += o.hess_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    if (o.order_ < order_)
        *this = truncated(o.order_);
    value_ -= o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i)
        grad_[i] -= o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i)
        hess_[i] -= o.hess_[i];
    return *this;
}

Jet& Jet::operator*=(double s)
{
    value_ *= s;
    for (auto& g : grad_)
        g *= s;
    for (auto& h : hess_)
        h *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b)
{
    const int order = std::min(a.order_, b.order_);
    const std::size_t n = a.dim_;
    Jet r(n, order, a.value_ * b.value_);
    if (order >= 1)
        for (std::size_t k = 0; k < n; ++k)
            r.grad_[k] = a.grad_[k] * b.value_ + a.value_ * b.grad_[k];
    if (order >= 2)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                r.hess_[k * n + l] = a.hess_[k * n + l] * b.value_ + a.grad_[k] * b.grad_[l] +
                                     a.grad_[l] * b.grad_[k] + a.value_ * b.hess_[k * n + l];
    return r;
}

Jet Jet::compose(double f0, double f1, double f2) const
{
    Jet r(dim_, order_, f0);
    for (std::size_t k = 0; k < grad_.size(); ++k)
        r.grad_[k] = f1 * grad_[k];
    if (order_ >= 2)
        for (std::size_t k = 0; k < dim_; ++k)
            for (std::size_t l = 0; l < dim_; ++l)
                r.hess_[k * dim_ + l] = f2 * grad_[k] * grad_[l] + f1 * hess_[k * dim_ + l];
    return r;
}

Jet reciprocal(const Jet& a)
{
    const double v = a.value();
    if (v == 0.0)
        throw InvalidArgumentError("reciprocal of a jet with zero value");
    return a.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

int min_order(const ComponentJets& v)
{
    int o = Jet::kMaxOrder;
    for (const auto& j : v)
        o = std::min(o, j.order());
    return o;
}

ComponentJets truncated(const ComponentJets& v, int order)
{
    ComponentJets out;
    out.reserve(v.size());
    for (const auto& j : v)
        out.push_back(j.truncated(order));
    return out;
}

std::vector<double> values(const ComponentJets& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& j : v)
        out.push_back(j.value());
    return out;
}

} // namespace pw
