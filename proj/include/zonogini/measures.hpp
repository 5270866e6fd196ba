#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zonogini/errors.hpp"
#include "zonogini/format.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/parallel.hpp"
#include "zonogini/rng.hpp"

namespace zonogini {

/// Uniform atomic measure (1/N per point) over N points in the non-negative
/// orthant. Points are stored row-major and never reweighted; duplicates and
/// zero points are kept verbatim.
class EmpiricalMeasure {
public:
    static EmpiricalMeasure from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) fail(errc::empty_input, "from_rows: no rows");
        const std::size_t d = rows[0].size();
        if (d == 0) fail(errc::empty_input, "from_rows: rows have no columns");
        std::vector<double> flat;
        flat.reserve(rows.size() * d);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != d)
                fail(errc::dimension_mismatch,
                     "from_rows: row " + std::to_string(r + 1) + " has " +
                         std::to_string(rows[r].size()) + " columns, expected " +
                         std::to_string(d));
            for (std::size_t c = 0; c < d; ++c) {
                const double v = rows[r][c];
                if (!std::isfinite(v))
                    fail(errc::non_finite, "from_rows: non-finite entry at row " +
                                               std::to_string(r + 1) + ", column " +
                                               std::to_string(c + 1));
                if (v < 0.0)
                    fail(errc::negative_component,
                         "from_rows: negative entry at row " + std::to_string(r + 1) +
                             ", column " + std::to_string(c + 1));
                flat.push_back(v);
            }
        }
        return EmpiricalMeasure(std::move(flat), d);
    }

    /// Takes pre-validated row-major data. Used by samplers that construct
    /// points in place.
    EmpiricalMeasure(std::vector<double> flat, std::size_t dim)
        : data_(std::move(flat)), dim_(dim) {}

    std::size_t size() const { return data_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool univariate() const { return dim_ == 1; }

    std::span<const double> point(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<const double> flat() const { return data_; }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(size());
        for (std::size_t i = 0; i < size(); ++i) {
            auto p = point(i);
            out[i].assign(p.begin(), p.end());
        }
        return out;
    }

    /// (1/N) sum of the points, accumulated left-to-right per coordinate.
    std::vector<double> mean() const {
        const std::size_t n = size();
        std::vector<KahanSum> acc(dim_);
        for (std::size_t i = 0; i < n; ++i) {
            auto p = point(i);
            for (std::size_t c = 0; c < dim_; ++c) acc[c].add(p[c]);
        }
        std::vector<double> out(dim_);
        for (std::size_t c = 0; c < dim_; ++c) out[c] = acc[c].value() / static_cast<double>(n);
        return out;
    }

    /// Sum of the points without the 1/N normalization.
    std::vector<double> total() const {
        std::vector<KahanSum> acc(dim_);
        for (std::size_t i = 0; i < size(); ++i) {
            auto p = point(i);
            for (std::size_t c = 0; c < dim_; ++c) acc[c].add(p[c]);
        }
        std::vector<double> out(dim_);
        for (std::size_t c = 0; c < dim_; ++c) out[c] = acc[c].value();
        return out;
    }

    std::vector<double> sorted_values() const {
        require_univariate("sorted_values");
        std::vector<double> v(data_);
        std::sort(v.begin(), v.end());
        return v;
    }

    /// Left-continuous generalized inverse of the empirical CDF: the smallest
    /// order statistic x_(k) with k/N >= s.
    double quantile(double s) const {
        require_univariate("quantile");
        check_quantile_arg(s);
        const auto v = sorted_values();
        const double n = static_cast<double>(v.size());
        std::size_t lo = 0, hi = v.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (static_cast<double>(mid + 1) / n >= s)
                hi = mid;
            else
                lo = mid + 1;
        }
        return v[lo];
    }

    /// {x_i} -> {(1, x_i)}: the atomic version of the delta_1 x mu product.
    EmpiricalMeasure lift() const {
        require_univariate("lift");
        std::vector<double> flat;
        flat.reserve(2 * size());
        for (double x : data_) {
            flat.push_back(1.0);
            flat.push_back(x);
        }
        return EmpiricalMeasure(std::move(flat), 2);
    }

    static void check_quantile_arg(double s) {
        if (!(s > 0.0 && s < 1.0))
            fail(errc::out_of_range, "quantile: s must lie in (0,1)");
    }

private:
    void require_univariate(const char* op) const {
        if (dim_ != 1)
            fail(errc::not_univariate,
                 std::string(op) + ": requires a univariate measure, got dim " +
                     std::to_string(dim_));
    }

    std::vector<double> data_;
    std::size_t dim_;
};

/// Samplable reference distribution with finite first moment, supported on
/// the non-negative orthant. Sampling is inverse-CDF only and draw i is a
/// pure function of (seed, i).
class ReferenceDistribution {
public:
    enum class Kind { exponential, uniform, lognormal, dirac, product, lift };

    static ReferenceDistribution exponential(double rate) {
        if (!(std::isfinite(rate) && rate > 0.0))
            fail(errc::invalid_argument, "exponential: rate must be finite and > 0");
        ReferenceDistribution d(Kind::exponential);
        d.a_ = rate;
        return d;
    }

    static ReferenceDistribution uniform(double lo, double hi) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && 0.0 <= lo && lo < hi))
            fail(errc::invalid_argument, "uniform: requires 0 <= a < b, both finite");
        ReferenceDistribution d(Kind::uniform);
        d.a_ = lo;
        d.b_ = hi;
        return d;
    }

    static ReferenceDistribution lognormal(double location, double scale) {
        if (!(std::isfinite(location) && std::isfinite(scale) && scale > 0.0))
            fail(errc::invalid_argument, "lognormal: scale must be finite and > 0");
        ReferenceDistribution d(Kind::lognormal);
        d.a_ = location;
        d.b_ = scale;
        return d;
    }

    static ReferenceDistribution dirac(std::vector<double> point) {
        if (point.empty()) fail(errc::empty_input, "dirac: empty point");
        for (double v : point) {
            if (!std::isfinite(v)) fail(errc::non_finite, "dirac: non-finite component");
            if (v < 0.0) fail(errc::negative_component, "dirac: negative component");
        }
        ReferenceDistribution d(Kind::dirac);
        d.point_ = std::move(point);
        return d;
    }

    static ReferenceDistribution product(std::vector<ReferenceDistribution> components) {
        if (components.empty()) fail(errc::empty_input, "product: no components");
        for (const auto& c : components)
            if (!c.univariate())
                fail(errc::not_univariate, "product: every component must be univariate");
        ReferenceDistribution d(Kind::product);
        d.children_ = std::move(components);
        return d;
    }

    static ReferenceDistribution lift(ReferenceDistribution inner) {
        if (!inner.univariate())
            fail(errc::not_univariate, "lift: inner distribution must be univariate");
        ReferenceDistribution d(Kind::lift);
        d.children_.push_back(std::move(inner));
        return d;
    }

    Kind kind() const { return kind_; }

    std::size_t dim() const {
        switch (kind_) {
            case Kind::dirac:   return point_.size();
            case Kind::product: return children_.size();
            case Kind::lift:    return 2;
            default:            return 1;
        }
    }

    bool univariate() const { return dim() == 1; }

    double rate() const { return a_; }
    double lo() const { return a_; }
    double hi() const { return b_; }
    double location() const { return a_; }
    double scale() const { return b_; }
    const std::vector<double>& dirac_point() const { return point_; }
    const std::vector<ReferenceDistribution>& components() const { return children_; }
    const ReferenceDistribution& inner() const { return children_.front(); }

    /// Closed-form first moment, component-wise.
    std::vector<double> mean() const {
        switch (kind_) {
            case Kind::exponential: return {1.0 / a_};
            case Kind::uniform:     return {0.5 * (a_ + b_)};
            case Kind::lognormal:   return {std::exp(a_ + 0.5 * b_ * b_)};
            case Kind::dirac:       return point_;
            case Kind::product: {
                std::vector<double> m;
                m.reserve(children_.size());
                for (const auto& c : children_) m.push_back(c.mean()[0]);
                return m;
            }
            case Kind::lift: {
                return {1.0, children_[0].mean()[0]};
            }
        }
        return {};
    }

    /// Left-continuous quantile of a univariate distribution.
    double quantile(double s) const {
        EmpiricalMeasure::check_quantile_arg(s);
        switch (kind_) {
            case Kind::exponential: return -std::log1p(-s) / a_;
            case Kind::uniform:     return a_ + (b_ - a_) * s;
            case Kind::lognormal:   return std::exp(a_ + b_ * normal_quantile(s));
            case Kind::dirac:
                if (point_.size() != 1)
                    fail(errc::not_univariate, "quantile: dirac point is multivariate");
                return point_[0];
            case Kind::product:
                if (children_.size() != 1)
                    fail(errc::not_univariate, "quantile: product is multivariate");
                return children_[0].quantile(s);
            case Kind::lift:
                fail(errc::not_univariate, "quantile: lifted distribution is bivariate");
        }
        return 0.0;
    }

    /// Draw with index `index` of the stream keyed by `seed`. Each kind
    /// consumes a fixed pattern of uniforms from its per-index substream.
    std::vector<double> sample_at(std::uint64_t seed, std::uint64_t index) const {
        rng::Stream stream(rng::derive(seed, index));
        std::vector<double> out(dim());
        sample_into(stream, out.data());
        return out;
    }

    /// n i.i.d. draws assembled into an EmpiricalMeasure. Identical
    /// (distribution, n, seed) give bit-identical output for any thread count.
    EmpiricalMeasure sample(std::size_t n, std::uint64_t seed, unsigned threads = 0) const {
        if (n == 0) fail(errc::empty_input, "sample: n must be >= 1");
        const std::size_t d = dim();
        std::vector<double> flat(n * d);
        constexpr std::size_t kBlock = 4096;
        const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
        double* base = flat.data();
        const ReferenceDistribution* self = this;
        for_each_block(n_blocks, threads, [=](std::size_t b) {
            const std::size_t begin = b * kBlock;
            const std::size_t end = std::min(begin + kBlock, n);
            for (std::size_t i = begin; i < end; ++i) {
                rng::Stream stream(rng::derive(seed, i));
                self->sample_into(stream, base + i * d);
            }
        });
        return EmpiricalMeasure(std::move(flat), d);
    }

    /// The CLI grammar form of this distribution, e.g. "lift:exp:1".
    std::string spec_string() const;

private:
    explicit ReferenceDistribution(Kind k) : kind_(k) {}

    void sample_into(rng::Stream& stream, double* out) const {
        switch (kind_) {
            case Kind::exponential:
                out[0] = -std::log1p(-stream.next_open_unit()) / a_;
                return;
            case Kind::uniform:
                out[0] = a_ + (b_ - a_) * stream.next_unit();
                return;
            case Kind::lognormal:
                out[0] = std::exp(a_ + b_ * normal_quantile(stream.next_open_unit()));
                return;
            case Kind::dirac:
                std::copy(point_.begin(), point_.end(), out);
                return;
            case Kind::product:
                for (std::size_t c = 0; c < children_.size(); ++c)
                    children_[c].sample_into(stream, out + c);
                return;
            case Kind::lift:
                out[0] = 1.0;
                children_[0].sample_into(stream, out + 1);
                return;
        }
    }

    Kind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> point_;
    std::vector<ReferenceDistribution> children_;
};

inline std::string ReferenceDistribution::spec_string() const {
    switch (kind_) {
        case Kind::exponential: return "exp:" + format_double(a_);
        case Kind::uniform:     return "unif:" + format_double(a_) + ":" + format_double(b_);
        case Kind::lognormal:   return "lognorm:" + format_double(a_) + ":" + format_double(b_);
        case Kind::dirac: {
            std::string s = "dirac:";
            for (std::size_t i = 0; i < point_.size(); ++i) {
                if (i) s += ',';
                s += format_double(point_[i]);
            }
            return s;
        }
        case Kind::product: {
            std::string s = "prod:";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += ';';
                s += children_[i].spec_string();
            }
            return s;
        }
        case Kind::lift: return "lift:" + children_[0].spec_string();
    }
    return {};
}

}  // namespace zonogini
