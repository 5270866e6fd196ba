#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zonogini/errors.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/parallel.hpp"
#include "zonogini/rng.hpp"
#include "zonogini/zonotope.hpp"

namespace zonogini {

enum class VolumeMethod { exact_enumeration, fast_2d, monte_carlo };

inline const char* volume_method_name(VolumeMethod m) {
    switch (m) {
        case VolumeMethod::exact_enumeration: return "exact";
        case VolumeMethod::fast_2d:           return "fast2d";
        case VolumeMethod::monte_carlo:       return "mc";
    }
    return "unknown";
}

struct VolumeResult {
    double value = 0.0;
    VolumeMethod method = VolumeMethod::exact_enumeration;
    std::optional<double> stderr_;  // present iff method == monte_carlo
    std::uint64_t terms = 0;        // determinants enumerated / pairs / MC tuples
    bool degenerate = false;        // fewer generators than dimensions: volume forced to 0
};

namespace detail {

using u128 = unsigned __int128;
inline constexpr u128 kU128Max = ~static_cast<u128>(0);

/// C(n, k) with saturation at 2^128 - 1.
inline u128 binomial_u128(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    u128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const u128 factor = n - k + i;
        if (result > kU128Max / factor) return kU128Max;
        result = result * factor / i;  // stays integral: result is C(n-k+i, i)
    }
    return result;
}

/// Lexicographically unranks `rank` into the k-combination out[0..k-1] of
/// {0,...,n-1}.
inline void unrank_combination(std::uint64_t n, std::uint64_t k, u128 rank,
                               std::uint64_t* out) {
    std::uint64_t value = 0;
    for (std::uint64_t pos = 0; pos < k; ++pos) {
        for (;; ++value) {
            const u128 count = binomial_u128(n - 1 - value, k - 1 - pos);
            if (rank < count) break;
            rank -= count;
        }
        out[pos] = value++;
    }
}

/// Advances c[0..k-1] to the next combination in lexicographic order.
inline bool next_combination(std::uint64_t n, std::uint64_t k, std::uint64_t* c) {
    std::uint64_t i = k;
    while (i-- > 0) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::uint64_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline double abs_det_2(const double* r0, const double* r1) {
    return std::abs(r0[0] * r1[1] - r0[1] * r1[0]);
}

inline double abs_det_3(const double* r0, const double* r1, const double* r2) {
    const double d = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                     r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                     r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
    return std::abs(d);
}

/// |det| via LU with partial pivoting; `m` is d x d row-major scratch,
/// overwritten.
inline double abs_det_lu(double* m, std::size_t d) {
    double det = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        double best = std::abs(m[col * d + col]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double cand = std::abs(m[r * d + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != col)
            for (std::size_t c = 0; c < d; ++c) std::swap(m[pivot * d + c], m[col * d + c]);
        const double diag = m[col * d + col];
        det *= diag;
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = m[r * d + col] / diag;
            if (f == 0.0) continue;
            for (std::size_t c = col + 1; c < d; ++c) m[r * d + c] -= f * m[col * d + c];
        }
    }
    return std::abs(det);
}

/// |det| of the rows picked by `idx` from the generator list.
inline double abs_det_rows(const Zonotope& z, const std::uint64_t* idx, std::size_t d,
                           double* scratch) {
    const double* base = z.flat().data();
    switch (d) {
        case 1:  return std::abs(base[idx[0]]);
        case 2:  return abs_det_2(base + idx[0] * 2, base + idx[1] * 2);
        case 3:  return abs_det_3(base + idx[0] * 3, base + idx[1] * 3, base + idx[2] * 3);
        default: break;
    }
    for (std::size_t r = 0; r < d; ++r) {
        const double* row = base + idx[r] * d;
        std::copy(row, row + d, scratch + r * d);
    }
    return abs_det_lu(scratch, d);
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultCombinationGuard = 1'000'000'000ull;

/// V_d(Z) = sum over all d-generator subsets of |det|. The sum is held in an
/// exact accumulator, so the result is bit-identical for any thread count and
/// any generator permutation. N < d yields volume 0 with the degenerate flag
/// set. C(N, d) beyond `guard` is refused; switch to mc_volume then.
inline VolumeResult exact_volume(const Zonotope& z,
                                 std::uint64_t guard = kDefaultCombinationGuard,
                                 unsigned threads = 0) {
    const std::size_t d = z.dim();
    const std::size_t n = z.size();
    if (n < d) return {0.0, VolumeMethod::exact_enumeration, std::nullopt, 0, true};

    const detail::u128 total = detail::binomial_u128(n, d);
    if (total > static_cast<detail::u128>(guard))
        fail(errc::combination_overflow,
             "exact_volume: C(" + std::to_string(n) + "," + std::to_string(d) +
                 ") exceeds the enumeration guard (" + std::to_string(guard) +
                 "); use the Monte Carlo engine");
    const std::uint64_t n_terms = static_cast<std::uint64_t>(total);

    constexpr std::uint64_t kBlock = 65536;
    const std::size_t n_blocks = static_cast<std::size_t>((n_terms + kBlock - 1) / kBlock);
    std::vector<ExactNonNegSum> partials(resolve_threads(threads) > 1 ? n_blocks : 1);
    const bool single = partials.size() == 1;

    for_each_block(n_blocks, threads, [&](std::size_t b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min(begin + kBlock, n_terms);
        std::vector<std::uint64_t> idx(d);
        std::vector<double> scratch(d * d);
        detail::unrank_combination(n, d, begin, idx.data());
        ExactNonNegSum& acc = partials[single ? 0 : b];
        for (std::uint64_t r = begin; r < end; ++r) {
            acc.add(detail::abs_det_rows(z, idx.data(), d, scratch.data()));
            detail::next_combination(n, d, idx.data());
        }
    });

    ExactNonNegSum sum;
    for (const auto& p : partials) sum.merge(p);
    return {sum.value(), VolumeMethod::exact_enumeration, std::nullopt, n_terms, false};
}

/// Volume of {0 <= z <= diag}: the product of the components.
inline double parallelotope_volume(std::span<const double> diag) {
    double p = 1.0;
    for (double v : diag) {
        if (!std::isfinite(v)) fail(errc::non_finite, "parallelotope_volume: non-finite component");
        if (v < 0.0)
            fail(errc::negative_component, "parallelotope_volume: negative component");
        p *= v;
    }
    return p;
}

/// O(N log N) evaluation of the d=2 determinant sum. After flipping every
/// generator into the closed upper half-plane (|cross| is unchanged) and
/// sorting by angle, all pairwise crosses are non-negative and prefix sums
/// collapse the double loop.
inline VolumeResult fast_volume_2d(const Zonotope& z) {
    if (z.dim() != 2)
        fail(errc::not_two_dimensional, "fast_volume_2d: zonotope must be 2-dimensional");

    struct Gen {
        double angle, x, y;
    };
    std::vector<Gen> gens;
    gens.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        auto g = z.generator(i);
        double x = g[0], y = g[1];
        if (x == 0.0 && y == 0.0) continue;
        if (y < 0.0 || (y == 0.0 && x < 0.0)) {
            x = -x;
            y = -y;
        }
        gens.push_back({std::atan2(y, x), x, y});
    }
    std::sort(gens.begin(), gens.end(), [](const Gen& a, const Gen& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });

    KahanSum px, py, total;
    for (const Gen& g : gens) {
        total.add(px.value() * g.y - py.value() * g.x);
        px.add(g.x);
        py.add(g.y);
    }
    const std::uint64_t m = gens.size();
    return {std::max(0.0, total.value()), VolumeMethod::fast_2d, std::nullopt,
            m < 2 ? 0 : m * (m - 1) / 2, z.size() < 2};
}

namespace detail {

/// Samplers feed d-dimensional rows to the Monte Carlo volume engine; row r
/// of tuple i must be a pure function of (seed, i, r).
template <typename S>
concept TupleSampler = requires(const S& s, std::uint64_t seed, std::uint64_t i, std::size_t r,
                                double* out) {
    { s.dim() } -> std::convertible_to<std::size_t>;
    s.fill_row(seed, i, r, out);
};

struct DistributionSampler {
    const ReferenceDistribution& dist;
    std::size_t dim() const { return dist.dim(); }
    void fill_row(std::uint64_t seed, std::uint64_t tuple, std::size_t row, double* out) const {
        const auto v = dist.sample_at(rng::derive(seed, tuple), row);
        std::copy(v.begin(), v.end(), out);
    }
};

/// With-replacement draws from the rows of a dataset.
struct EmpiricalSampler {
    const EmpiricalMeasure& mu;
    std::size_t dim() const { return mu.dim(); }
    void fill_row(std::uint64_t seed, std::uint64_t tuple, std::size_t row, double* out) const {
        rng::Stream stream(rng::derive(seed, tuple, row));
        const auto k = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(stream.next_u64()) * mu.size()) >> 64);
        auto p = mu.point(k);
        std::copy(p.begin(), p.end(), out);
    }
};

template <TupleSampler S>
VolumeResult mc_volume_impl(const S& sampler, std::size_t d, std::uint64_t tuples,
                            std::uint64_t seed, unsigned threads) {
    if (sampler.dim() != d)
        fail(errc::dimension_mismatch,
             "mc_volume: sampler dimension " + std::to_string(sampler.dim()) +
                 " does not match requested d = " + std::to_string(d));
    if (tuples < 30) fail(errc::invalid_argument, "mc_volume: tuples must be >= 30");

    constexpr std::uint64_t kBlock = 4096;
    const std::size_t n_blocks = static_cast<std::size_t>((tuples + kBlock - 1) / kBlock);
    std::vector<KahanSum> sums(n_blocks), sq_sums(n_blocks);
    for_each_block(n_blocks, threads, [&](std::size_t b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min(begin + kBlock, tuples);
        std::vector<double> rows(d * d);
        std::vector<double> scratch(d * d);
        KahanSum s, s2;
        for (std::uint64_t i = begin; i < end; ++i) {
            for (std::size_t r = 0; r < d; ++r) sampler.fill_row(seed, i, r, rows.data() + r * d);
            double v;
            if (d == 1)
                v = std::abs(rows[0]);
            else if (d == 2)
                v = abs_det_2(rows.data(), rows.data() + 2);
            else if (d == 3)
                v = abs_det_3(rows.data(), rows.data() + 3, rows.data() + 6);
            else {
                std::copy(rows.begin(), rows.end(), scratch.begin());
                v = abs_det_lu(scratch.data(), d);
            }
            s.add(v);
            s2.add(v * v);
        }
        sums[b] = s;
        sq_sums[b] = s2;
    });

    KahanSum total, total_sq;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        total.merge(sums[b]);
        total_sq.merge(sq_sums[b]);
    }
    double factorial = 1.0;
    for (std::size_t i = 2; i <= d; ++i) factorial *= static_cast<double>(i);
    const double n = static_cast<double>(tuples);
    const double mean = total.value() / n;
    const double var = std::max(0.0, (total_sq.value() - n * mean * mean) / (n - 1.0));
    const double sem = std::sqrt(var / n);
    return {mean / factorial, VolumeMethod::monte_carlo, sem / factorial, tuples, false};
}

}  // namespace detail

/// Monte Carlo estimate of V_d(Z(mu)) = E|det(X_1,...,X_d)| / d! for i.i.d.
/// rows X_i ~ dist, with the standard error of the mean (also 1/d!-scaled).
inline VolumeResult mc_volume(const ReferenceDistribution& dist, std::size_t d,
                              std::uint64_t tuples, std::uint64_t seed, unsigned threads = 0) {
    return detail::mc_volume_impl(detail::DistributionSampler{dist}, d, tuples, seed, threads);
}

/// Same estimator over with-replacement tuples from a dataset. Estimates the
/// volume of the mean zonotope Z(mu_hat); multiply by N^d for the total
/// zonotope (repeated rows contribute zero determinants, which the estimator
/// already prices in).
inline VolumeResult mc_volume_empirical(const EmpiricalMeasure& mu, std::uint64_t tuples,
                                        std::uint64_t seed, unsigned threads = 0) {
    return detail::mc_volume_impl(detail::EmpiricalSampler{mu}, mu.dim(), tuples, seed, threads);
}

}  // namespace zonogini
