#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "zonogini/errors.hpp"

namespace zonogini {

/// Kahan-Babuska (Neumaier) compensated accumulator. Left-to-right addition
/// order is part of the contract: identical inputs in identical order give
/// bit-identical sums.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    void merge(const KahanSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// Exact fixed-point accumulator for non-negative doubles. The internal state
/// is the mathematically exact sum, so the result does not depend on addition
/// order: partial sums from parallel workers merge without rounding and the
/// total is bit-identical for any thread count or input permutation.
/// Capacity: 2^40 addends of any finite non-negative double.
class ExactNonNegSum {
public:
    void add(double x) {
        if (x == 0.0) return;
        int e = 0;
        const double m = std::frexp(x, &e);
        std::uint64_t mant = static_cast<std::uint64_t>(m * 9007199254740992.0);  // m * 2^53
        int shift = e - 53 + 1074;  // bit offset in units of 2^-1074
        if (shift < 0) {            // subnormal: mantissa has matching trailing zeros
            mant >>= -shift;
            shift = 0;
        }
        const std::size_t limb = static_cast<std::size_t>(shift) / 64;
        const unsigned bit = static_cast<unsigned>(shift) % 64;
        const unsigned __int128 wide = static_cast<unsigned __int128>(mant) << bit;
        add_at(limb, static_cast<std::uint64_t>(wide));
        add_at(limb + 1, static_cast<std::uint64_t>(wide >> 64));
    }

    void merge(const ExactNonNegSum& other) {
        for (std::size_t i = 0; i < kLimbs; ++i) add_at(i, other.limbs_[i]);
    }

    /// Faithfully rounded value of the exact sum.
    double value() const {
        KahanSum acc;
        for (std::size_t i = kLimbs; i-- > 0;)
            if (limbs_[i] != 0)
                acc.add(std::ldexp(static_cast<double>(limbs_[i]), 64 * static_cast<int>(i) - 1074));
        return acc.value();
    }

private:
    void add_at(std::size_t limb, std::uint64_t v) {
        while (v != 0 && limb < kLimbs) {
            const std::uint64_t old = limbs_[limb];
            limbs_[limb] = old + v;
            v = limbs_[limb] < old ? 1 : 0;  // carry
            ++limb;
        }
    }

    static constexpr std::size_t kLimbs = 34;  // 2098-bit double range + 2^40 headroom
    std::uint64_t limbs_[kLimbs] = {};
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    KahanSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

inline double norm2(std::span<const double> a) {
    KahanSum acc;
    for (double x : a) acc.add(x * x);
    return std::sqrt(acc.value());
}

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Standard normal quantile, Wichura's PPND16 rational approximation
/// (relative error below 1e-15 on (0,1)).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        fail(errc::out_of_range, "normal_quantile: p must lie in (0,1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace zonogini
