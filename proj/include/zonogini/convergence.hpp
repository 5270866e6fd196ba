#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zonogini/errors.hpp"
#include "zonogini/gini.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/parallel.hpp"
#include "zonogini/rng.hpp"
#include "zonogini/volume.hpp"
#include "zonogini/zonotope.hpp"

namespace zonogini {

struct GcOptions {
    std::size_t hausdorff_budget = 64;        // 0 disables the d_H trace
    std::uint64_t reference_tuples = 1'000'000;
    std::size_t reference_multiplier = 16;    // proxy sample = multiplier * max schedule N
    std::uint64_t mc_tuples = 100'000;        // per-cell fallback when exact is infeasible
    unsigned threads = 0;
};

struct GcCell {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::optional<double> gini;       // empty when the sample total had a zero coordinate
    std::optional<double> hausdorff;  // empty when the trace is disabled
};

struct ConvergenceTrace {
    std::string distribution;
    std::vector<std::size_t> schedule;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double reference_gini = 0.0;
    double reference_stderr = 0.0;
    std::vector<GcCell> cells;  // ordered by (trial, schedule position)
};

namespace detail {

// Tags separating the independent seed streams of one experiment.
inline constexpr std::uint64_t kSeedTagReference = 0xA11CE;
inline constexpr std::uint64_t kSeedTagProxy = 0xB0B;
inline constexpr std::uint64_t kSeedTagHausdorff = 0xD157;
inline constexpr std::uint64_t kSeedTagMc = 0xCA4;

/// Mean zonotope with bitwise-identical points merged into one generator of
/// the combined weight. The body is unchanged; atoms of multiplicity N get
/// scale N/N = 1, which keeps repeated-point supports exactly reproducible
/// across sample sizes (a Dirac sample of any size yields the same single
/// generator).
inline Zonotope collapsed_mean_zonotope(const EmpiricalMeasure& mu) {
    const std::size_t d = mu.dim();
    const std::size_t n = mu.size();
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<std::size_t> first;   // index of first occurrence
    std::vector<std::size_t> counts;
    seen.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = mu.point(i);
        std::string key(reinterpret_cast<const char*>(p.data()), d * sizeof(double));
        auto [it, inserted] = seen.emplace(std::move(key), first.size());
        if (inserted) {
            first.push_back(i);
            counts.push_back(1);
        } else {
            ++counts[it->second];
        }
    }
    std::vector<double> gens;
    gens.reserve(first.size() * d);
    for (std::size_t k = 0; k < first.size(); ++k) {
        const double w = static_cast<double>(counts[k]) / static_cast<double>(n);
        auto p = mu.point(first[k]);
        for (std::size_t c = 0; c < d; ++c) gens.push_back(p[c] * w);
    }
    return Zonotope(std::move(gens), d);
}

inline GiniReport cell_gini(const EmpiricalMeasure& mu, std::uint64_t cell_seed,
                            const GcOptions& opts, unsigned threads) {
    GiniOptions g;
    g.threads = threads;
    if (mu.dim() == 2) {
        g.method = GiniMethod::fast2d;
    } else if (binomial_u128(mu.size(), mu.dim()) <=
               static_cast<u128>(kAutoExactThreshold)) {
        g.method = GiniMethod::exact;
    } else {
        g.method = GiniMethod::mc;
        g.mc_tuples = opts.mc_tuples;
        g.seed = rng::derive(cell_seed, kSeedTagMc);
    }
    return gini_volume(mu, g);
}

}  // namespace detail

/// Draws empirical measures of every scheduled size for every trial, records
/// the empirical Gini volume of each draw (flagged undefined when a total
/// coordinate is zero) and, optionally, a Hausdorff lower bound against a
/// large fixed-sample stand-in for the population zonoid. Cell (t, N) depends
/// only on (seed, t, N), so traces are reproducible for any worker count and
/// stable under growing the trial count.
inline ConvergenceTrace gc_experiment(const ReferenceDistribution& dist,
                                      const std::vector<std::size_t>& schedule,
                                      std::size_t trials, std::uint64_t seed,
                                      const GcOptions& opts = {}) {
    if (schedule.empty()) fail(errc::invalid_schedule, "gc_experiment: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] == 0) fail(errc::invalid_schedule, "gc_experiment: N must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1])
            fail(errc::invalid_schedule, "gc_experiment: schedule must be strictly increasing");
    }
    if (trials < 1) fail(errc::invalid_argument, "gc_experiment: trials must be >= 1");
    const auto m = dist.mean();
    for (std::size_t c = 0; c < m.size(); ++c)
        if (!(m[c] > 0.0))
            fail(errc::degenerate_mean,
                 "gc_experiment: mean coordinate " + std::to_string(c + 1) +
                     " is not strictly positive");

    ConvergenceTrace trace;
    trace.distribution = dist.spec_string();
    trace.schedule = schedule;
    trace.trials = trials;
    trace.seed = seed;

    if (auto closed = generalized_gini_closed_form(dist)) {
        trace.reference_gini = *closed;
        trace.reference_stderr = 0.0;
    } else {
        const auto ref = generalized_gini(dist, opts.reference_tuples,
                                          rng::derive(seed, detail::kSeedTagReference),
                                          opts.threads);
        trace.reference_gini = ref.gini;
        trace.reference_stderr = *ref.stderr_;
    }

    std::optional<Zonotope> proxy;
    if (opts.hausdorff_budget > 0) {
        const std::size_t proxy_n = schedule.back() * opts.reference_multiplier;
        const auto sample =
            dist.sample(proxy_n, rng::derive(seed, detail::kSeedTagProxy), opts.threads);
        proxy = detail::collapsed_mean_zonotope(sample);
    }

    const std::size_t n_cells = trials * schedule.size();
    trace.cells.resize(n_cells);
    GcCell* cells = trace.cells.data();
    const auto* schedule_ptr = &schedule;
    for_each_block(n_cells, opts.threads, [&, cells, schedule_ptr](std::size_t idx) {
        const std::size_t t = idx / schedule_ptr->size();
        const std::size_t n = (*schedule_ptr)[idx % schedule_ptr->size()];
        const std::uint64_t cell_seed =
            rng::derive(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(n));
        const auto sample = dist.sample(n, cell_seed, 1);

        GcCell cell;
        cell.n = n;
        cell.trial = t;
        const auto total = sample.total();
        const bool defined =
            std::all_of(total.begin(), total.end(), [](double v) { return v > 0.0; });
        if (defined) cell.gini = detail::cell_gini(sample, cell_seed, opts, 1).gini;
        if (proxy) {
            const auto body = detail::collapsed_mean_zonotope(sample);
            cell.hausdorff = hausdorff_estimate(body, *proxy, opts.hausdorff_budget,
                                                rng::derive(cell_seed, detail::kSeedTagHausdorff),
                                                1)
                                 .lower_bound;
        }
        cells[idx] = cell;
    });
    return trace;
}

struct GcColumnStats {
    std::size_t count = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    double min = std::numeric_limits<double>::quiet_NaN();
    double max = std::numeric_limits<double>::quiet_NaN();
};

struct GcRowSummary {
    std::size_t n = 0;
    GcColumnStats gini;
    double abs_err_median = std::numeric_limits<double>::quiet_NaN();
    GcColumnStats hausdorff;
};

struct GcSummary {
    std::vector<GcRowSummary> per_n;
    bool abs_err_median_strictly_decreasing = false;
    bool hausdorff_median_non_increasing = false;
};

namespace detail {

inline double median_of_sorted(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline GcColumnStats column_stats(std::vector<double> values) {
    GcColumnStats s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.median = median_of_sorted(values);
    KahanSum sum;
    for (double v : values) sum.add(v);
    s.mean = sum.value() / static_cast<double>(values.size());
    if (values.size() > 1) {
        KahanSum sq;
        for (double v : values) sq.add((v - s.mean) * (v - s.mean));
        s.stddev = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
    } else {
        s.stddev = 0.0;
    }
    return s;
}

}  // namespace detail

/// Per-N statistics over trials plus the two monotonicity indicators the
/// convergence criteria look at. Undefined Gini cells are excluded from the
/// Gini columns.
inline GcSummary summarize(const ConvergenceTrace& trace) {
    GcSummary out;
    out.per_n.reserve(trace.schedule.size());
    for (std::size_t n : trace.schedule) {
        std::vector<double> ginis, errs, hausdorffs;
        for (const auto& cell : trace.cells) {
            if (cell.n != n) continue;
            if (cell.gini) {
                ginis.push_back(*cell.gini);
                errs.push_back(std::abs(*cell.gini - trace.reference_gini));
            }
            if (cell.hausdorff) hausdorffs.push_back(*cell.hausdorff);
        }
        GcRowSummary row;
        row.n = n;
        row.gini = detail::column_stats(std::move(ginis));
        std::sort(errs.begin(), errs.end());
        row.abs_err_median = detail::median_of_sorted(errs);
        row.hausdorff = detail::column_stats(std::move(hausdorffs));
        out.per_n.push_back(row);
    }

    out.abs_err_median_strictly_decreasing = out.per_n.size() >= 1;
    out.hausdorff_median_non_increasing = !out.per_n.empty() && out.per_n[0].hausdorff.count > 0;
    for (std::size_t i = 1; i < out.per_n.size(); ++i) {
        const auto& prev = out.per_n[i - 1];
        const auto& cur = out.per_n[i];
        if (!(cur.abs_err_median < prev.abs_err_median))
            out.abs_err_median_strictly_decreasing = false;
        if (cur.hausdorff.count == 0 || !(cur.hausdorff.median <= prev.hausdorff.median))
            out.hausdorff_median_non_increasing = false;
    }
    if (!out.per_n.empty() && out.per_n[0].gini.count == 0)
        out.abs_err_median_strictly_decreasing = false;
    return out;
}

}  // namespace zonogini
