#pragma once

#include "pw/connection.hpp"
#include "pw/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

namespace pwtest {

using namespace pw;

inline ScalarField sf(const Chart& c, const std::string& text) { return expr::parse(text, c.coords()); }

inline CovectorField covector(const Chart& c, std::vector<std::string> comps)
{
    std::vector<ScalarField> out;
    for (const auto& s : comps)
        out.push_back(sf(c, s));
    return {c, std::move(out)};
}

inline BivectorField bivector(const Chart& c, std::vector<std::tuple<std::size_t, std::size_t, std::string>> e)
{
    std::vector<BivectorField::Entry> entries;
    for (auto& [i, j, s] : e)
        entries.push_back({i, j, sf(c, s)});
    return {c, entries};
}

inline Cometric cometric(const Chart& c, std::vector<std::tuple<std::size_t, std::size_t, std::string>> e)
{
    std::vector<Cometric::Entry> entries;
    for (auto& [i, j, s] : e)
        entries.push_back({i, j, sf(c, s)});
    return {c, entries};
}

inline PoissonManifold flat2d()
{
    Chart c("r2", {"x", "y"});
    return {"flat2d", bivector(c, {{0, 1, "1"}}), Cometric::euclidean(c)};
}

inline PoissonManifold poisson_x()
{
    Chart c("r2", {"x", "y"});
    return {"poisson_x", bivector(c, {{0, 1, "x"}}), Cometric::euclidean(c)};
}

inline PoissonManifold so3_star()
{
    Chart c("r3", {"x1", "x2", "x3"});
    return {"so3_star", bivector(c, {{0, 1, "x3"}, {1, 2, "x1"}, {0, 2, "-x2"}}), Cometric::euclidean(c)};
}

inline std::vector<Point> points(const Chart& c, std::size_t n = 100, std::uint64_t seed = 42,
                                 SamplingSpec spec = {})
{
    return sample_points(c, spec, n, seed);
}

inline SamplingSpec avoid_small(const Chart& c, const std::string& e, double m = 0.1)
{
    SamplingSpec s;
    s.avoid.push_back({sf(c, e), m});
    return s;
}

inline double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace pwtest
