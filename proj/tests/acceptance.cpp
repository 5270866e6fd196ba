// Acceptance suite: one scenario per release criterion, each printed as a
// single PASS/FAIL line. Exits nonzero if any scenario fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "zonogini/zonogini.hpp"

using namespace zonogini;

namespace {

int g_failures = 0;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(int number, const char* title, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %-46s %s\n", pass ? "PASS" : "FAIL", number, title,
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buf[256];
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

EmpiricalMeasure random_dataset(std::uint64_t seed, std::size_t n, std::size_t d, double lo,
                                double hi) {
    rng::Stream stream(seed);
    std::vector<double> flat(n * d);
    for (double& x : flat) x = lo + (hi - lo) * stream.next_open_unit();
    return EmpiricalMeasure(std::move(flat), d);
}

// ---------------------------------------------------------------- criteria

void criterion_1_limit_cases() {
    auto t0 = Clock::now();
    const double g_square = gini_volume(EmpiricalMeasure::from_rows({{1, 0}, {0, 1}})).gini;
    const double ms_square = ms_since(t0);

    t0 = Clock::now();
    const double g_flat =
        gini_volume(EmpiricalMeasure::from_rows({{1, 1}, {2, 2}, {5, 5}})).gini;
    const double ms_flat = ms_since(t0);

    const bool pass = std::abs(g_square - 1.0) <= 1e-12 && std::abs(g_flat) <= 1e-12 &&
                      ms_square < 1.0 && ms_flat < 1.0;
    report(1, "exact limit cases G=1 and G=0", pass,
           fmt("|G-1|=%.2e |G-0|=%.2e in %.3f/%.3f ms", std::abs(g_square - 1.0),
               std::abs(g_flat), ms_square, ms_flat));
}

void criterion_2_hand_instance() {
    const auto t0 = Clock::now();
    const double g = gini_volume(EmpiricalMeasure::from_rows({{1, 0}, {0, 1}, {1, 1}})).gini;
    const double ms = ms_since(t0);
    const bool pass = std::abs(g - 0.75) <= 1e-12 && ms < 1.0;
    report(2, "hand-enumerable instance G=3/4", pass,
           fmt("|G-0.75|=%.2e in %.3f ms", std::abs(g - 0.75), ms));
}

void criterion_3_lift_equivalence() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
        rng::Stream stream(rng::derive(2026, rep));
        const std::size_t n = 1 + static_cast<std::size_t>(stream.next_unit() * 63.0);
        std::vector<double> xs(n);
        for (double& x : xs) x = 1e-9 + 10.0 * stream.next_open_unit();
        std::vector<std::vector<double>> rows;
        for (double x : xs) rows.push_back({x});
        const auto lifted = EmpiricalMeasure::from_rows(rows).lift();

        const double classical = classical_gini_pairwise(xs);
        GiniOptions opts;
        opts.method = GiniMethod::fast2d;
        worst = std::max(worst, std::abs(gini_volume(lifted, opts).gini - classical));
        opts.method = GiniMethod::exact;
        worst = std::max(worst, std::abs(gini_volume(lifted, opts).gini - classical));
    }
    const double ms = ms_since(t0);
    const bool pass = worst <= 1e-10 && ms < 1000.0;
    report(3, "lift equivalence on 200 random datasets", pass,
           fmt("max |diff|=%.2e in %.0f ms", worst, ms));
}

void criterion_4_reference_values() {
    auto t0 = Clock::now();
    const auto exp_rep = generalized_gini(
        ReferenceDistribution::lift(ReferenceDistribution::exponential(1.0)), 1'000'000, 101);
    const double ms_exp = ms_since(t0);
    const double err_exp = std::abs(exp_rep.gini - 0.5);
    const bool pass_exp = err_exp <= 3.0 * *exp_rep.stderr_ && ms_exp < 10'000.0;

    t0 = Clock::now();
    const auto unif_rep = generalized_gini(
        ReferenceDistribution::lift(ReferenceDistribution::uniform(0.0, 1.0)), 1'000'000, 102);
    const double ms_unif = ms_since(t0);
    const double err_unif = std::abs(unif_rep.gini - 1.0 / 3.0);
    const bool pass_unif = err_unif <= 3.0 * *unif_rep.stderr_ && ms_unif < 10'000.0;

    report(4, "generalized Gini of lifted Exp(1) and U(0,1)", pass_exp && pass_unif,
           fmt("errs %.1e<=%.1e, %.1e<=%.1e in %.0f/%.0f ms", err_exp, 3.0 * *exp_rep.stderr_,
               err_unif, 3.0 * *unif_rep.stderr_, ms_exp, ms_unif));
}

ConvergenceTrace run_flagship_experiment(double* elapsed_ms) {
    const auto t0 = Clock::now();
    const auto trace =
        gc_experiment(ReferenceDistribution::lift(ReferenceDistribution::exponential(1.0)),
                      {100, 1000, 10000}, 20, kDefaultSeed);
    *elapsed_ms = ms_since(t0);
    return trace;
}

void criterion_5_and_6_convergence() {
    double ms = 0.0;
    const auto trace = run_flagship_experiment(&ms);
    const auto summary = summarize(trace);

    std::string meds;
    for (const auto& row : summary.per_n) meds += fmt("%.4f ", row.abs_err_median);
    const bool decreasing = summary.abs_err_median_strictly_decreasing;
    const bool final_small = summary.per_n.back().abs_err_median <= 0.01;
    report(5, "Gini convergence for lifted Exp(1)", decreasing && final_small && ms < 60'000.0,
           fmt("median errs [%s] in %.0f ms", meds.c_str(), ms));

    std::string hmeds;
    for (const auto& row : summary.per_n) hmeds += fmt("%.4f ", row.hausdorff.median);
    bool dirac_zero = true;
    const auto dirac_trace =
        gc_experiment(ReferenceDistribution::dirac({1, 1}), {100, 1000}, 5, kDefaultSeed);
    for (const auto& cell : dirac_trace.cells)
        dirac_zero = dirac_zero && cell.hausdorff.has_value() && *cell.hausdorff == 0.0;
    report(6, "Hausdorff trace shrinks; Dirac is exactly 0",
           summary.hausdorff_median_non_increasing && dirac_zero,
           fmt("medians [%s] dirac_zero=%d", hmeds.c_str(), dirac_zero ? 1 : 0));
}

void criterion_7_volume_cross_validation() {
    double worst_rel = 0.0;
    for (std::uint64_t rep = 0; rep < 500; ++rep) {
        rng::Stream stream(rng::derive(3030, rep));
        const std::size_t n = 2 + static_cast<std::size_t>(stream.next_unit() * 80.0);
        std::vector<double> gens(2 * n);
        for (double& v : gens) v = 10.0 * stream.next_open_unit() - 5.0;
        const Zonotope z(std::move(gens), 2);
        const double exact = exact_volume(z).value;
        const double fast = fast_volume_2d(z).value;
        if (exact > 0.0) worst_rel = std::max(worst_rel, std::abs(fast - exact) / exact);
    }
    const bool pass_fast = worst_rel <= 1e-9;

    int mc_misses = 0;
    double worst_sigma = 0.0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        rng::Stream stream(rng::derive(4040, rep));
        const std::size_t d = 2 + static_cast<std::size_t>(stream.next_unit() * 3.0);
        const std::size_t n = d + static_cast<std::size_t>(stream.next_unit() *
                                                           static_cast<double>(12 - d));
        const auto mu = random_dataset(rng::derive(4041, rep), n, d, 0.05, 4.0);
        const double exact = exact_volume(total_zonotope(mu)).value;
        auto mc = mc_volume_empirical(mu, 120'000, rng::derive(4042, rep));
        const double homothety =
            std::pow(static_cast<double>(n), static_cast<double>(d));
        mc.value *= homothety;
        *mc.stderr_ *= homothety;
        const double sigmas =
            *mc.stderr_ > 0.0 ? std::abs(mc.value - exact) / *mc.stderr_
                              : (mc.value == exact ? 0.0 : 1e9);
        worst_sigma = std::max(worst_sigma, sigmas);
        if (sigmas > 3.0) ++mc_misses;
    }
    report(7, "volume engines cross-validate", pass_fast && mc_misses == 0,
           fmt("fast2d rel=%.1e, mc worst=%.2f sigma, misses=%d", worst_rel, worst_sigma,
               mc_misses));
}

void criterion_8_invariances() {
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        rng::Stream stream(rng::derive(5050, rep));
        const std::size_t d = 2 + static_cast<std::size_t>(stream.next_unit() * 3.0);
        const std::size_t n = d + static_cast<std::size_t>(stream.next_unit() * 26.0);
        const auto mu = random_dataset(rng::derive(5051, rep), n, d, 0.01, 10.0);
        const double base = gini_volume(mu).gini;

        std::vector<double> rescaled(mu.flat().begin(), mu.flat().end());
        std::vector<double> scale(d);
        for (double& c : scale) c = 0.2 + 5.0 * stream.next_open_unit();
        for (std::size_t i = 0; i < rescaled.size(); ++i) rescaled[i] *= scale[i % d];
        worst = std::max(
            worst, std::abs(gini_volume(EmpiricalMeasure(std::move(rescaled), d)).gini - base));

        std::vector<double> doubled(mu.flat().begin(), mu.flat().end());
        doubled.insert(doubled.end(), mu.flat().begin(), mu.flat().end());
        worst = std::max(
            worst, std::abs(gini_volume(EmpiricalMeasure(std::move(doubled), d)).gini - base));

        auto rows = mu.rows();
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[static_cast<std::size_t>(
                                       stream.next_unit() * static_cast<double>(i))]);
        worst = std::max(worst,
                         std::abs(gini_volume(EmpiricalMeasure::from_rows(rows)).gini - base));
    }
    report(8, "rescaling/replication/permutation invariance", worst <= 1e-10,
           fmt("max |change|=%.2e", worst));
}

void criterion_9_algebraic_properties() {
    // support additivity under concatenation
    double worst_add = 0.0;
    {
        rng::Stream stream(6061);
        std::vector<double> ga(3 * 21), gb(3 * 13);
        for (double& v : ga) v = 8.0 * stream.next_open_unit() - 4.0;
        for (double& v : gb) v = 8.0 * stream.next_open_unit() - 4.0;
        const Zonotope a(std::move(ga), 3), b(std::move(gb), 3);
        const auto ab = minkowski_concat(a, b);
        for (std::uint64_t k = 0; k < 100; ++k) {
            rng::Stream ds(rng::derive(6062, k));
            std::vector<double> v(3);
            for (double& x : v) x = normal_quantile(ds.next_open_unit());
            const auto xi = Direction::of(std::move(v));
            worst_add = std::max(
                worst_add, std::abs(support(ab, xi) - (support(a, xi) + support(b, xi))));
        }
    }

    // linear-image equivariance, bitwise
    bool equivariant = true;
    for (std::uint64_t rep = 0; rep < 100 && equivariant; ++rep) {
        rng::Stream stream(rng::derive(6063, rep));
        const std::size_t d = 2 + static_cast<std::size_t>(stream.next_unit() * 3.0);
        const std::size_t k = 1 + static_cast<std::size_t>(stream.next_unit() * 4.0);
        const std::size_t n = 1 + static_cast<std::size_t>(stream.next_unit() * 24.0);
        std::vector<std::vector<double>> mat_rows(k, std::vector<double>(d));
        for (auto& row : mat_rows)
            for (double& v : row) v = 6.0 * stream.next_open_unit() - 3.0;
        const Matrix mat = Matrix::from_rows(mat_rows);
        const auto mu = random_dataset(rng::derive(6064, rep), n, d, 0.0, 5.0);

        const auto via_zonotope = linear_image(total_zonotope(mu), mat);
        std::vector<double> mapped;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const auto y = mat.apply(mu.point(i));
            mapped.insert(mapped.end(), y.begin(), y.end());
        }
        const Zonotope via_points(std::move(mapped), k);
        const auto direct = via_points.flat();
        const auto image = via_zonotope.flat();
        equivariant = image.size() == direct.size();
        for (std::size_t i = 0; equivariant && i < image.size(); ++i)
            equivariant = image[i] == direct[i];
    }

    // homothety between total and mean volumes
    double worst_rel = 0.0;
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        rng::Stream stream(rng::derive(6065, rep));
        const std::size_t d = 2 + static_cast<std::size_t>(stream.next_unit() * 2.0);
        const std::size_t n = d + static_cast<std::size_t>(stream.next_unit() * 12.0);
        const auto mu = random_dataset(rng::derive(6066, rep), n, d, 0.0, 6.0);
        const double total = exact_volume(total_zonotope(mu)).value;
        const double mean = exact_volume(mean_zonotope(mu)).value;
        const double scaled =
            mean * std::pow(static_cast<double>(n), static_cast<double>(d));
        if (total > 0.0) worst_rel = std::max(worst_rel, std::abs(scaled - total) / total);
    }

    report(9, "support additivity, equivariance, homothety",
           worst_add <= 1e-12 && equivariant && worst_rel <= 1e-10,
           fmt("add=%.1e equivariant=%d homothety rel=%.1e", worst_add, equivariant ? 1 : 0,
               worst_rel));
}

void criterion_10_performance() {
    const auto z128 = [] {
        rng::Stream stream(8080);
        std::vector<double> gens(128 * 3);
        for (double& v : gens) v = stream.next_open_unit();
        return Zonotope(std::move(gens), 3);
    }();
    auto t0 = Clock::now();
    const auto r128 = exact_volume(z128, kDefaultCombinationGuard, 1);
    const double ms128 = ms_since(t0);

    const auto z512 = [] {
        rng::Stream stream(8081);
        std::vector<double> gens(512 * 3);
        for (double& v : gens) v = stream.next_open_unit();
        return Zonotope(std::move(gens), 3);
    }();
    t0 = Clock::now();
    const auto r512 = exact_volume(z512);  // default parallelism
    const double ms512 = ms_since(t0);

    const double v1 = exact_volume(z512, kDefaultCombinationGuard, 1).value;
    const double v2 = exact_volume(z512, kDefaultCombinationGuard, 2).value;
    const double v8 = exact_volume(z512, kDefaultCombinationGuard, 8).value;
    const bool deterministic = v1 == r512.value && v2 == r512.value && v8 == r512.value;

    const bool pass = r128.terms == 341'376 && ms128 < 1000.0 && r512.terms == 22'238'720 &&
                      ms512 < 10'000.0 && deterministic;
    report(10, "enumeration speed and thread determinism", pass,
           fmt("341k dets %.0f ms (1 thr), 22.2M dets %.0f ms, bitwise=%d", ms128, ms512,
               deterministic ? 1 : 0));
}

}  // namespace

int main() {
    std::printf("zonogini acceptance suite\n");
    criterion_1_limit_cases();
    criterion_2_hand_instance();
    criterion_3_lift_equivalence();
    criterion_4_reference_values();
    criterion_5_and_6_convergence();
    criterion_7_volume_cross_validation();
    criterion_8_invariances();
    criterion_9_algebraic_properties();
    criterion_10_performance();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
