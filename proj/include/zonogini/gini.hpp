#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zonogini/errors.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/volume.hpp"
#include "zonogini/zonotope.hpp"

namespace zonogini {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::uint64_t kAutoExactThreshold = 20'000'000ull;

/// G(Z) = V(Z) / V(P_Z) plus the pieces it was computed from.
struct GiniReport {
    double gini = 0.0;
    double zonotope_volume = 0.0;       // total zonotope Z = sum of [0, y_n]
    double parallelotope_volume = 0.0;  // box spanned by the main diagonal
    VolumeMethod method = VolumeMethod::exact_enumeration;
    std::optional<double> stderr_;
    std::size_t n_points = 0;
    std::size_t dim = 0;
};

enum class GiniMethod { automatic, exact, fast2d, mc };

inline const char* gini_method_name(GiniMethod m) {
    switch (m) {
        case GiniMethod::automatic: return "auto";
        case GiniMethod::exact:     return "exact";
        case GiniMethod::fast2d:    return "fast2d";
        case GiniMethod::mc:        return "mc";
    }
    return "unknown";
}

struct GiniOptions {
    GiniMethod method = GiniMethod::automatic;
    std::uint64_t mc_tuples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t exact_guard = kDefaultCombinationGuard;
    unsigned threads = 0;
};

/// Heterogeneity of a dataset: the volume of its total zonotope over the
/// volume of the diagonal box. Requires every coordinate total to be
/// strictly positive; otherwise the ratio is undefined and we refuse loudly.
///
/// method::automatic picks fast2d in the plane and exact enumeration while
/// C(N, d) stays under 2e7; beyond that it refuses and asks for mc, which
/// samples with-replacement tuples from the dataset (that estimates the mean
/// zonotope's volume, so the N^d homothety factor is applied before forming
/// the ratio).
inline GiniReport gini_volume(const EmpiricalMeasure& mu, const GiniOptions& opts = {}) {
    const std::size_t d = mu.dim();
    const std::size_t n = mu.size();
    const auto diag = mu.total();
    for (std::size_t c = 0; c < d; ++c)
        if (diag[c] <= 0.0)
            fail(errc::degenerate_parallelotope,
                 "gini_volume: coordinate " + std::to_string(c + 1) +
                     " of the total is zero; the Gini volume is undefined");
    const double p_volume = parallelotope_volume(diag);

    GiniMethod method = opts.method;
    if (method == GiniMethod::automatic) {
        if (d == 2) {
            method = GiniMethod::fast2d;
        } else if (detail::binomial_u128(n, d) <=
                   static_cast<detail::u128>(kAutoExactThreshold)) {
            method = GiniMethod::exact;
        } else {
            fail(errc::combination_overflow,
                 "gini_volume: C(" + std::to_string(n) + "," + std::to_string(d) +
                     ") is too large for automatic exact enumeration; rerun with method=mc");
        }
    }

    VolumeResult vol;
    switch (method) {
        case GiniMethod::exact:
            vol = exact_volume(total_zonotope(mu), opts.exact_guard, opts.threads);
            break;
        case GiniMethod::fast2d:
            vol = fast_volume_2d(total_zonotope(mu));
            break;
        case GiniMethod::mc: {
            vol = mc_volume_empirical(mu, opts.mc_tuples, opts.seed, opts.threads);
            const double homothety = std::pow(static_cast<double>(n), static_cast<double>(d));
            vol.value *= homothety;
            if (vol.stderr_) *vol.stderr_ *= homothety;
            break;
        }
        case GiniMethod::automatic:
            break;  // resolved above
    }

    GiniReport rep;
    rep.gini = vol.value / p_volume;
    rep.zonotope_volume = vol.value;
    rep.parallelotope_volume = p_volume;
    rep.method = vol.method;
    if (vol.stderr_) rep.stderr_ = *vol.stderr_ / p_volume;
    rep.n_points = n;
    rep.dim = d;
    return rep;
}

/// Gini index of a reference distribution: Monte Carlo volume of its zonoid
/// over the closed-form mean box.
inline GiniReport generalized_gini(const ReferenceDistribution& dist, std::uint64_t mc_tuples,
                                   std::uint64_t seed, unsigned threads = 0) {
    const auto m = dist.mean();
    for (std::size_t c = 0; c < m.size(); ++c)
        if (!(m[c] > 0.0))
            fail(errc::degenerate_mean,
                 "generalized_gini: mean coordinate " + std::to_string(c + 1) +
                     " is not strictly positive");
    const double p_volume = parallelotope_volume(m);
    const VolumeResult vol = mc_volume(dist, dist.dim(), mc_tuples, seed, threads);

    GiniReport rep;
    rep.gini = vol.value / p_volume;
    rep.zonotope_volume = vol.value;
    rep.parallelotope_volume = p_volume;
    rep.method = VolumeMethod::monte_carlo;
    rep.stderr_ = *vol.stderr_ / p_volume;
    rep.n_points = 0;
    rep.dim = dist.dim();
    return rep;
}

/// Integral of the quantile function from 0 to t, the generalized Lorenz
/// ordinate. Closed forms exist for every supported reference kind.
inline double lorenz_value(const ReferenceDistribution& dist, double t) {
    if (!dist.univariate())
        fail(errc::not_univariate, "lorenz_value: distribution must be univariate");
    if (!(t >= 0.0 && t <= 1.0)) fail(errc::out_of_range, "lorenz_value: t must lie in [0,1]");
    if (t == 0.0) return 0.0;
    const double mean = dist.mean()[0];
    if (t == 1.0) return mean;
    using Kind = ReferenceDistribution::Kind;
    switch (dist.kind()) {
        case Kind::exponential:
            return (t + (1.0 - t) * std::log1p(-t)) / dist.rate();
        case Kind::uniform:
            return dist.lo() * t + 0.5 * (dist.hi() - dist.lo()) * t * t;
        case Kind::lognormal:
            return mean * normal_cdf(normal_quantile(t) - dist.scale());
        case Kind::dirac:
            return dist.dirac_point()[0] * t;
        case Kind::product:
            return lorenz_value(dist.components()[0], t);
        case Kind::lift:
            break;
    }
    fail(errc::not_univariate, "lorenz_value: lifted distribution is bivariate");
}

/// Generalized Lorenz curve t -> (t, integral of Q over [0, t]). Starts at
/// (0,0), ends at (1, mean), convex because Q is non-decreasing. The dual
/// curve is the point reflection through (1/2, mean/2).
struct LorenzCurve {
    std::vector<std::pair<double, double>> nodes;
    double mean = 0.0;

    LorenzCurve dual() const {
        LorenzCurve out;
        out.mean = mean;
        out.nodes.reserve(nodes.size());
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
            out.nodes.emplace_back(1.0 - it->first, mean - it->second);
        return out;
    }
};

inline void check_lorenz_grid(std::size_t grid) {
    if (grid < 2) fail(errc::invalid_argument, "lorenz_curve: grid_size must be >= 2");
}

inline LorenzCurve lorenz_curve(const ReferenceDistribution& dist, std::size_t grid = 512) {
    check_lorenz_grid(grid);
    LorenzCurve curve;
    curve.mean = dist.mean()[0];
    if (!dist.univariate())
        fail(errc::not_univariate, "lorenz_curve: distribution must be univariate");
    curve.nodes.reserve(grid + 1);
    for (std::size_t k = 0; k <= grid; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(grid);
        curve.nodes.emplace_back(t, lorenz_value(dist, t));
    }
    return curve;
}

/// Exact piecewise-linear Lorenz curve of a dataset: Q is the step function
/// through the order statistics, so the integral is a prefix sum plus a
/// partial step.
inline LorenzCurve lorenz_curve(const EmpiricalMeasure& mu, std::size_t grid = 512) {
    check_lorenz_grid(grid);
    const auto sorted = mu.sorted_values();
    const std::size_t n = sorted.size();
    std::vector<double> prefix(n + 1, 0.0);
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(sorted[i]);
        prefix[i + 1] = acc.value();
    }
    const double dn = static_cast<double>(n);

    LorenzCurve curve;
    curve.mean = prefix[n] / dn;
    curve.nodes.reserve(grid + 1);
    for (std::size_t k = 0; k <= grid; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(grid);
        auto j = static_cast<std::size_t>(std::floor(t * dn));
        if (j > n) j = n;
        double v = prefix[j] / dn;
        if (j < n) v += (t - static_cast<double>(j) / dn) * sorted[j];
        curve.nodes.emplace_back(t, v);
    }
    return curve;
}

/// Classical Gini oracle: sum over all pairs of |x_i - x_j| / (2 N^2 mean),
/// evaluated in O(N log N) by sorting (x_(k) enters k pairs as the larger
/// value and N-1-k as the smaller).
inline double classical_gini_pairwise(std::span<const double> values) {
    if (values.empty()) fail(errc::empty_input, "classical_gini_pairwise: no values");
    for (double v : values) {
        if (!std::isfinite(v)) fail(errc::non_finite, "classical_gini_pairwise: non-finite value");
        if (v < 0.0)
            fail(errc::negative_component, "classical_gini_pairwise: negative value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    KahanSum weighted, plain;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        weighted.add((2.0 * static_cast<double>(k) + 1.0 - n) * sorted[k]);
        plain.add(sorted[k]);
    }
    const double total = plain.value();
    if (!(total > 0.0)) fail(errc::zero_mean, "classical_gini_pairwise: mean is zero");
    return weighted.value() / (n * total);
}

/// Closed-form classical Gini of a univariate distribution, when known.
inline std::optional<double> classical_gini_closed_form(const ReferenceDistribution& dist) {
    using Kind = ReferenceDistribution::Kind;
    switch (dist.kind()) {
        case Kind::exponential: return 0.5;
        case Kind::uniform:     return (dist.hi() - dist.lo()) / (3.0 * (dist.hi() + dist.lo()));
        case Kind::lognormal:   return 2.0 * normal_cdf(dist.scale() / std::sqrt(2.0)) - 1.0;
        case Kind::dirac:       return dist.dirac_point().size() == 1
                                           ? std::optional<double>(0.0)
                                           : std::nullopt;
        case Kind::product:
            return dist.components().size() == 1
                       ? classical_gini_closed_form(dist.components()[0])
                       : std::nullopt;
        case Kind::lift: break;
    }
    return std::nullopt;
}

/// Closed-form generalized Gini index, when known: the lift zonoid reduces
/// to the classical Gini of the inner distribution, any Dirac zonoid is a
/// segment (index 0), and a univariate zonoid fills its whole mean interval
/// (index 1).
inline std::optional<double> generalized_gini_closed_form(const ReferenceDistribution& dist) {
    using Kind = ReferenceDistribution::Kind;
    if (dist.kind() == Kind::lift) return classical_gini_closed_form(dist.inner());
    if (dist.kind() == Kind::dirac) return 0.0;
    if (dist.univariate()) return 1.0;
    return std::nullopt;
}

}  // namespace zonogini
