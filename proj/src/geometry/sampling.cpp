#include "pw/sampling.hpp"

#include <cmath>
#include <random>

namespace pw {

std::pair<double, double> SamplingSpec::range(const std::string& coord) const
{
    for (const auto& [name, r] : box)
        if (name == coord)
            return r;
    return {-2.0, 2.0};
}

bool SamplingSpec::admits(const Point& p) const
{
    for (const auto& a : avoid) {
        double v;
        try {
            v = expr::evaluate(a.expr, p);
        } catch (const expr::DomainError&) {
            return false;
        }
        if (std::abs(v) < a.min_abs)
            return false;
    }
    return true;
}

std::vector<Point> sample_points(const Chart& chart, const SamplingSpec& spec, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::uniform_real_distribution<double>> dists;
    for (const auto& c : chart.coords()) {
        const auto [lo, hi] = spec.range(c);
        if (!(lo <= hi))
            throw InvalidArgumentError("sampling box for '" + c + "' is empty");
        dists.emplace_back(lo, hi);
    }

    std::vector<Point> out;
    out.reserve(count);
    const std::size_t budget = 1000 * count + 1000;
    std::size_t tries = 0;
    std::vector<double> x(chart.dim());
    while (out.size() < count) {
        if (++tries > budget)
            throw InvalidArgumentError("sampling on chart '" + chart.name() +
                                       "' rejected too many points; check the avoid list");
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = dists[i](rng);
        Point p = chart.point(x);
        if (spec.admits(p))
            out.push_back(std::move(p));
    }
    return out;
}

} // namespace pw
