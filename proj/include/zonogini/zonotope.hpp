#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zonogini/errors.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/parallel.hpp"
#include "zonogini/rng.hpp"

namespace zonogini {

/// Minkowski sum of segments [0, g_i]. Only the generator list is stored;
/// vertices and facets are never enumerated. Zero and duplicate generators
/// are legal and kept in place so generator index i stays aligned with data
/// point i.
class Zonotope {
public:
    Zonotope(std::vector<double> flat_generators, std::size_t dim)
        : data_(std::move(flat_generators)), dim_(dim) {
        if (dim_ == 0) fail(errc::empty_input, "Zonotope: dim must be >= 1");
        if (data_.size() % dim_ != 0)
            fail(errc::dimension_mismatch, "Zonotope: generator data not a multiple of dim");
        if (!all_finite(data_)) fail(errc::non_finite, "Zonotope: non-finite generator");
    }

    static Zonotope empty(std::size_t dim) { return Zonotope({}, dim); }

    std::size_t size() const { return data_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> generator(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<const double> flat() const { return data_; }

    /// Sum of the generators: the endpoint of the main diagonal.
    std::vector<double> diagonal() const {
        std::vector<KahanSum> acc(dim_);
        for (std::size_t i = 0; i < size(); ++i) {
            auto g = generator(i);
            for (std::size_t c = 0; c < dim_; ++c) acc[c].add(g[c]);
        }
        std::vector<double> out(dim_);
        for (std::size_t c = 0; c < dim_; ++c) out[c] = acc[c].value();
        return out;
    }

    Zonotope scaled(double factor) const {
        std::vector<double> out(data_);
        for (double& v : out) v *= factor;
        return Zonotope(std::move(out), dim_);
    }

private:
    std::vector<double> data_;
    std::size_t dim_;
};

/// Unit vector; the argument of support functions.
class Direction {
public:
    explicit Direction(std::vector<double> components) : v_(std::move(components)) {
        const double n = norm2(v_);
        if (std::abs(n - 1.0) > 1e-12)
            fail(errc::invalid_argument, "Direction: vector is not unit length");
    }

    /// Normalizes, so any nonzero vector is accepted.
    static Direction of(std::vector<double> v) {
        const double n = norm2(v);
        if (!(n > 0.0) || !std::isfinite(n))
            fail(errc::invalid_argument, "Direction: zero or non-finite vector");
        for (double& x : v) x /= n;
        return Direction(Normalized{}, std::move(v));
    }

    std::span<const double> components() const { return v_; }
    std::size_t dim() const { return v_.size(); }

    Direction negated() const {
        std::vector<double> v(v_);
        for (double& x : v) x = -x;
        return Direction(Normalized{}, std::move(v));
    }

private:
    struct Normalized {};
    Direction(Normalized, std::vector<double> v) : v_(std::move(v)) {}

    std::vector<double> v_;
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* op) {
    if (a != b)
        fail(errc::dimension_mismatch, std::string(op) + ": dimension mismatch (" +
                                           std::to_string(a) + " vs " + std::to_string(b) + ")");
}

/// Z = sum of [0, y_n]: one generator per data point, order preserved.
inline Zonotope total_zonotope(const EmpiricalMeasure& mu) {
    auto flat = mu.flat();
    return Zonotope(std::vector<double>(flat.begin(), flat.end()), mu.dim());
}

/// Z(mu_hat): generators y_n / N, so total = N * mean.
inline Zonotope mean_zonotope(const EmpiricalMeasure& mu) {
    auto flat = mu.flat();
    std::vector<double> gens(flat.begin(), flat.end());
    const double n = static_cast<double>(mu.size());
    for (double& v : gens) v /= n;
    return Zonotope(std::move(gens), mu.dim());
}

/// Minkowski sum: the generator lists concatenate.
inline Zonotope minkowski_concat(const Zonotope& a, const Zonotope& b) {
    require_same_dim(a.dim(), b.dim(), "minkowski_concat");
    std::vector<double> gens;
    gens.reserve(a.flat().size() + b.flat().size());
    gens.insert(gens.end(), a.flat().begin(), a.flat().end());
    gens.insert(gens.end(), b.flat().begin(), b.flat().end());
    return Zonotope(std::move(gens), a.dim());
}

/// Support function: each segment contributes its endpoint iff it points into
/// the half-space of xi, so h(xi) = sum_i max(<g_i, xi>, 0).
inline double support(const Zonotope& z, const Direction& xi) {
    require_same_dim(z.dim(), xi.dim(), "support");
    const double* dir = xi.components().data();
    const double* g = z.flat().data();
    const std::size_t d = z.dim();
    KahanSum acc;
    for (std::size_t i = 0; i < z.size(); ++i, g += d) {
        double t = 0.0;
        for (std::size_t c = 0; c < d; ++c) t += g[c] * dir[c];
        if (t > 0.0) acc.add(t);
    }
    return acc.value();
}

/// Monte Carlo estimate of the zonoid support h_{Z(mu)}(xi) = E max(<X,xi>,0),
/// with the standard error of the mean. Deterministic given the seed.
struct SupportEstimate {
    double estimate;
    double stderr_;
    std::size_t samples;
};

inline SupportEstimate support_of_measure(const ReferenceDistribution& dist, const Direction& xi,
                                          std::size_t samples, std::uint64_t seed,
                                          unsigned threads = 0) {
    require_same_dim(dist.dim(), xi.dim(), "support_of_measure");
    if (samples < 2) fail(errc::invalid_argument, "support_of_measure: samples must be >= 2");

    constexpr std::size_t kBlock = 8192;
    const std::size_t n_blocks = (samples + kBlock - 1) / kBlock;
    std::vector<KahanSum> sums(n_blocks), sq_sums(n_blocks);
    auto dir = xi.components();
    for_each_block(n_blocks, threads, [&](std::size_t b) {
        const std::size_t begin = b * kBlock;
        const std::size_t end = std::min(begin + kBlock, samples);
        KahanSum s, s2;
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = dist.sample_at(seed, i);
            const double v = std::max(dot(x, dir), 0.0);
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
    const double n = static_cast<double>(samples);
    const double mean = total.value() / n;
    const double var = std::max(0.0, (total_sq.value() - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), samples};
}

/// Dense row-major matrix for linear images.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            fail(errc::dimension_mismatch, "Matrix: data size does not match shape");
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) fail(errc::empty_input, "Matrix: no rows");
        std::vector<double> data;
        data.reserve(rows.size() * rows[0].size());
        for (const auto& r : rows) {
            if (r.size() != rows[0].size())
                fail(errc::dimension_mismatch, "Matrix: ragged rows");
            data.insert(data.end(), r.begin(), r.end());
        }
        return Matrix(rows.size(), rows[0].size(), std::move(data));
    }

    static Matrix identity(std::size_t n) {
        std::vector<double> data(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
        return Matrix(n, n, std::move(data));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> apply(std::span<const double> v) const {
        require_same_dim(cols_, v.size(), "Matrix::apply");
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = dot(row(r), v);
        return out;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// L(Z): generators mapped one by one, order preserved. Matches mapping the
/// data points first and building the zonotope after.
inline Zonotope linear_image(const Zonotope& z, const Matrix& mat) {
    require_same_dim(mat.cols(), z.dim(), "linear_image");
    std::vector<double> gens;
    gens.reserve(z.size() * mat.rows());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto mapped = mat.apply(z.generator(i));
        gens.insert(gens.end(), mapped.begin(), mapped.end());
    }
    return Zonotope(std::move(gens), mat.rows());
}

struct HausdorffEstimate {
    double lower_bound;
    std::size_t directions_used;
};

/// max |h_a - h_b| over an explicit direction set. This is a lower bound of
/// d_H for any set of unit directions; it is exact when the set contains a
/// maximizing direction.
inline HausdorffEstimate hausdorff_lower_bound(const Zonotope& a, const Zonotope& b,
                                               std::span<const Direction> dirs,
                                               unsigned threads = 0) {
    require_same_dim(a.dim(), b.dim(), "hausdorff_lower_bound");
    std::vector<double> gaps(dirs.size(), 0.0);
    constexpr std::size_t kBlock = 16;
    const std::size_t n_blocks = (dirs.size() + kBlock - 1) / kBlock;
    for_each_block(n_blocks, threads, [&](std::size_t blk) {
        const std::size_t begin = blk * kBlock;
        const std::size_t end = std::min(begin + kBlock, dirs.size());
        for (std::size_t i = begin; i < end; ++i)
            gaps[i] = std::abs(support(a, dirs[i]) - support(b, dirs[i]));
    });
    double best = 0.0;
    for (double g : gaps) best = std::max(best, g);
    return {best, dirs.size()};
}

namespace detail {

inline void push_axis_directions(std::size_t dim, std::vector<Direction>& dirs) {
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> e(dim, 0.0);
        e[c] = 1.0;
        dirs.push_back(Direction(e));
        e[c] = -1.0;
        dirs.push_back(Direction(std::move(e)));
    }
}

inline void push_diagonal_directions(const Zonotope& z, std::vector<Direction>& dirs) {
    auto diag = z.diagonal();
    if (norm2(diag) > 0.0) {
        auto d = Direction::of(std::move(diag));
        dirs.push_back(d.negated());
        dirs.push_back(std::move(d));
    }
}

/// Evenly strided, normalized generator directions, at most cap of them.
inline void push_generator_directions(const Zonotope& z, std::size_t cap,
                                      std::vector<Direction>& dirs) {
    if (cap == 0 || z.size() == 0) return;
    const std::size_t stride = std::max<std::size_t>(1, z.size() / cap);
    std::size_t taken = 0;
    for (std::size_t i = 0; i < z.size() && taken < cap; i += stride) {
        auto g = z.generator(i);
        std::vector<double> v(g.begin(), g.end());
        if (norm2(v) > 0.0) {
            dirs.push_back(Direction::of(std::move(v)));
            ++taken;
        }
    }
}

inline Direction random_sphere_direction(std::size_t dim, std::uint64_t seed,
                                         std::uint64_t index) {
    rng::Stream stream(rng::derive(seed, index));
    std::vector<double> v(dim);
    for (double& x : v) x = normal_quantile(stream.next_open_unit());
    if (norm2(v) > 1e-12) return Direction::of(std::move(v));
    std::vector<double> e(dim, 0.0);
    e[0] = 1.0;
    return Direction(std::move(e));
}

}  // namespace detail

/// Direction-sampled lower bound of the Hausdorff distance between two
/// zonotopes. The set always holds the signed axis directions and both main
/// diagonals; per body, up to budget/4 evenly strided generator directions
/// join them, and seeded uniform sphere directions fill the set up to budget.
/// The exact d_H would need a normal-fan traversal; the reported value is a
/// lower bound that is tight for axis- and diagonal-extreme pairs.
inline HausdorffEstimate hausdorff_estimate(const Zonotope& a, const Zonotope& b,
                                            std::size_t budget, std::uint64_t seed,
                                            unsigned threads = 0) {
    require_same_dim(a.dim(), b.dim(), "hausdorff_estimate");
    const std::size_t d = a.dim();
    if (budget < 2 * d)
        fail(errc::invalid_argument, "hausdorff_estimate: budget must be >= 2*dim");

    std::vector<Direction> dirs;
    dirs.reserve(budget + 2 * d + 4);
    detail::push_axis_directions(d, dirs);
    detail::push_diagonal_directions(a, dirs);
    detail::push_diagonal_directions(b, dirs);
    const std::size_t gen_cap = budget / 4;
    detail::push_generator_directions(a, gen_cap, dirs);
    detail::push_generator_directions(b, gen_cap, dirs);
    for (std::uint64_t j = 0; dirs.size() < budget; ++j)
        dirs.push_back(detail::random_sphere_direction(d, seed, j));

    return hausdorff_lower_bound(a, b, dirs, threads);
}

}  // namespace zonogini
