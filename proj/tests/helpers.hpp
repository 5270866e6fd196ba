#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "zonogini/measures.hpp"
#include "zonogini/rng.hpp"
#include "zonogini/zonotope.hpp"

namespace testutil {

/// Random dataset in (lo, hi]^d with N points.
inline zonogini::EmpiricalMeasure random_measure(std::uint64_t seed, std::size_t n,
                                                 std::size_t d, double lo = 0.0,
                                                 double hi = 10.0) {
    zonogini::rng::Stream stream(seed);
    std::vector<double> flat;
    flat.reserve(n * d);
    for (std::size_t i = 0; i < n * d; ++i)
        flat.push_back(lo + (hi - lo) * stream.next_open_unit());
    return zonogini::EmpiricalMeasure(std::move(flat), d);
}

inline zonogini::Zonotope random_zonotope(std::uint64_t seed, std::size_t n, std::size_t d,
                                          double lo = -5.0, double hi = 5.0) {
    zonogini::rng::Stream stream(seed);
    std::vector<double> flat;
    flat.reserve(n * d);
    for (std::size_t i = 0; i < n * d; ++i)
        flat.push_back(lo + (hi - lo) * stream.next_open_unit());
    return zonogini::Zonotope(std::move(flat), d);
}

inline zonogini::Direction random_direction(std::uint64_t seed, std::size_t d) {
    zonogini::rng::Stream stream(seed);
    std::vector<double> v(d);
    for (double& x : v) x = zonogini::normal_quantile(stream.next_open_unit());
    return zonogini::Direction::of(std::move(v));
}

/// Composite Simpson on [a,b] with n subintervals (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        acc += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Tensor-product Simpson of f over [a,b]^2.
inline double simpson2d(const std::function<double(double, double)>& f, double a, double b,
                        std::size_t n) {
    return simpson(
        [&](double x) {
            return simpson([&](double y) { return f(x, y); }, a, b, n);
        },
        a, b, n);
}

}  // namespace testutil
