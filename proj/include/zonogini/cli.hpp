#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zonogini/convergence.hpp"
#include "zonogini/csv.hpp"
#include "zonogini/errors.hpp"
#include "zonogini/gini.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/volume.hpp"
#include "zonogini/zonotope.hpp"

namespace zonogini::cli {

// Exit statuses: 0 ok, 2 usage, 3 data, 4 resource guard.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitGuard = 4;

inline constexpr const char* kDistGrammar =
    "exp:L | unif:a:b | lognorm:m:s | dirac:v1,...,vd | lift:<univariate spec> | "
    "prod:<spec>;<spec>;...";

namespace detail {

inline double parse_number(std::string_view s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(errc::invalid_argument, what + ": cannot parse '" + std::string(s) + "' as a number");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

}  // namespace detail

/// Parses the distribution grammar (see kDistGrammar).
inline ReferenceDistribution parse_distribution(std::string_view spec) {
    auto expect = [&](std::string_view prefix) -> std::optional<std::string_view> {
        if (spec.substr(0, prefix.size()) == prefix) return spec.substr(prefix.size());
        return std::nullopt;
    };
    if (auto rest = expect("exp:"))
        return ReferenceDistribution::exponential(detail::parse_number(*rest, "exp rate"));
    if (auto rest = expect("unif:")) {
        const auto parts = detail::split(*rest, ':');
        if (parts.size() != 2)
            fail(errc::invalid_argument, "unif spec needs two parameters: unif:a:b");
        return ReferenceDistribution::uniform(detail::parse_number(parts[0], "unif a"),
                                              detail::parse_number(parts[1], "unif b"));
    }
    if (auto rest = expect("lognorm:")) {
        const auto parts = detail::split(*rest, ':');
        if (parts.size() != 2)
            fail(errc::invalid_argument, "lognorm spec needs two parameters: lognorm:m:s");
        return ReferenceDistribution::lognormal(detail::parse_number(parts[0], "lognorm m"),
                                                detail::parse_number(parts[1], "lognorm s"));
    }
    if (auto rest = expect("dirac:")) {
        std::vector<double> point;
        for (auto part : detail::split(*rest, ','))
            point.push_back(detail::parse_number(part, "dirac component"));
        return ReferenceDistribution::dirac(std::move(point));
    }
    if (auto rest = expect("lift:")) return ReferenceDistribution::lift(parse_distribution(*rest));
    if (auto rest = expect("prod:")) {
        std::vector<ReferenceDistribution> comps;
        for (auto part : detail::split(*rest, ';')) comps.push_back(parse_distribution(part));
        return ReferenceDistribution::product(std::move(comps));
    }
    fail(errc::invalid_argument,
         "unknown distribution spec '" + std::string(spec) + "'; grammar: " + kDistGrammar);
}

namespace detail {

inline GiniMethod parse_gini_method(const std::string& s) {
    if (s == "auto") return GiniMethod::automatic;
    if (s == "exact") return GiniMethod::exact;
    if (s == "fast2d") return GiniMethod::fast2d;
    if (s == "mc") return GiniMethod::mc;
    fail(errc::invalid_argument, "unknown method '" + s + "' (auto|exact|fast2d|mc)");
}

inline nlohmann::json volume_json(const VolumeResult& v) {
    nlohmann::json j;
    j["value"] = v.value;
    j["method"] = volume_method_name(v.method);
    j["stderr"] = v.stderr_ ? nlohmann::json(*v.stderr_) : nlohmann::json(nullptr);
    j["terms"] = v.terms;
    j["degenerate"] = v.degenerate;
    return j;
}

inline nlohmann::json gini_json(const GiniReport& r) {
    nlohmann::json j;
    j["gini"] = r.gini;
    j["zonotope_volume"] = r.zonotope_volume;
    j["parallelotope_volume"] = r.parallelotope_volume;
    j["method"] = volume_method_name(r.method);
    j["stderr"] = r.stderr_ ? nlohmann::json(*r.stderr_) : nlohmann::json(nullptr);
    j["n_points"] = r.n_points;
    j["dim"] = r.dim;
    return j;
}

inline nlohmann::json column_json(const GcColumnStats& c) {
    nlohmann::json j;
    j["count"] = c.count;
    j["mean"] = c.mean;
    j["median"] = c.median;
    j["std"] = c.stddev;
    j["min"] = c.min;
    j["max"] = c.max;
    return j;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name. All output
/// goes to the given streams, which keeps the whole front end testable
/// in-process.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zonotope-based multidimensional Gini index toolkit"};
    app.require_subcommand(1);
    app.footer(std::string("Distribution spec grammar: ") + kDistGrammar +
               "\nAll randomized commands are deterministic for a fixed --seed (default " +
               std::to_string(kDefaultSeed) + ").");

    // Common knobs, duplicated per subcommand so each help page is complete.
    struct Common {
        std::string input;
        std::string dist_spec;
        std::string method = "auto";
        std::uint64_t seed = kDefaultSeed;
        std::uint64_t tuples = 1'000'000;
        std::uint64_t guard = kDefaultCombinationGuard;
        unsigned threads = 0;
        bool has_header = false;
    };

    Common gini_opts;
    auto* gini_cmd = app.add_subcommand("gini", "Gini volume of a CSV dataset");
    gini_cmd->add_option("--input", gini_opts.input, "CSV dataset, one point per row")
        ->required();
    gini_cmd->add_flag("--has-header", gini_opts.has_header, "skip the first CSV line");
    gini_cmd->add_option("--method", gini_opts.method, "auto|exact|fast2d|mc");
    gini_cmd->add_option("--mc-tuples", gini_opts.tuples, "Monte Carlo tuples for method=mc");
    gini_cmd->add_option("--seed", gini_opts.seed, "RNG seed");
    gini_cmd->add_option("--guard", gini_opts.guard, "max determinants for method=exact");
    gini_cmd->add_option("--threads", gini_opts.threads, "worker threads (0 = all)")
        ->envname("ZONOGINI_THREADS");

    Common vol_opts;
    vol_opts.method = "auto";
    auto* vol_cmd = app.add_subcommand("volume", "Zonotope volume of a dataset or distribution");
    auto* vol_input = vol_cmd->add_option("--input", vol_opts.input,
                                          "CSV of generators (total zonotope of the rows)");
    auto* vol_dist =
        vol_cmd->add_option("--dist", vol_opts.dist_spec, "reference distribution spec");
    vol_input->excludes(vol_dist);
    vol_cmd->add_flag("--has-header", vol_opts.has_header, "skip the first CSV line");
    vol_cmd->add_option("--method", vol_opts.method, "auto|exact|fast2d|mc (file input only)");
    vol_cmd->add_option("--mc-tuples", vol_opts.tuples, "Monte Carlo tuples");
    vol_cmd->add_option("--seed", vol_opts.seed, "RNG seed");
    vol_cmd->add_option("--guard", vol_opts.guard, "max determinants for method=exact");
    vol_cmd->add_option("--threads", vol_opts.threads, "worker threads (0 = all)")
        ->envname("ZONOGINI_THREADS");

    Common lor_opts;
    std::size_t lor_grid = 512;
    std::string lor_output;
    bool lor_dual = false;
    auto* lor_cmd = app.add_subcommand("lorenz", "Generalized Lorenz curve as 2-column CSV");
    auto* lor_input =
        lor_cmd->add_option("--input", lor_opts.input, "univariate CSV dataset (one column)");
    auto* lor_dist =
        lor_cmd->add_option("--dist", lor_opts.dist_spec, "univariate distribution spec");
    lor_input->excludes(lor_dist);
    lor_cmd->add_flag("--has-header", lor_opts.has_header, "skip the first CSV line");
    lor_cmd->add_option("--grid", lor_grid, "number of grid intervals (>= 2)");
    lor_cmd->add_flag("--dual", lor_dual, "emit the dual curve instead");
    lor_cmd->add_option("--output", lor_output, "write CSV here instead of stdout");

    Common gc_opts_cli;
    std::string gc_schedule_str;
    std::size_t gc_trials = 20;
    GcOptions gc_opts;
    std::string gc_csv_path;
    auto* gc_cmd =
        app.add_subcommand("gc", "Empirical Gini convergence experiment across sample sizes");
    gc_cmd->add_option("--dist", gc_opts_cli.dist_spec, "distribution spec")->required();
    gc_cmd->add_option("--schedule", gc_schedule_str, "comma-separated increasing sample sizes")
        ->required();
    gc_cmd->add_option("--trials", gc_trials, "independent trials per sample size");
    gc_cmd->add_option("--seed", gc_opts_cli.seed, "RNG seed");
    gc_cmd->add_option("--hausdorff-budget", gc_opts.hausdorff_budget,
                       "directions for the Hausdorff trace (0 disables)");
    gc_cmd->add_option("--reference-tuples", gc_opts.reference_tuples,
                       "Monte Carlo tuples for the reference Gini");
    gc_cmd->add_option("--ref-multiplier", gc_opts.reference_multiplier,
                       "proxy sample size = multiplier * max schedule N");
    gc_cmd->add_option("--mc-tuples", gc_opts.mc_tuples,
                       "per-draw Monte Carlo tuples when exact enumeration is infeasible");
    gc_cmd->add_option("--csv", gc_csv_path, "also write a per-N summary CSV to this path");
    gc_cmd->add_option("--threads", gc_opts.threads, "worker threads (0 = all)")
        ->envname("ZONOGINI_THREADS");

    Common hd_opts;
    std::string hd_input_b;
    std::size_t hd_budget = 256;
    auto* hd_cmd = app.add_subcommand(
        "hausdorff", "Hausdorff lower bound between the mean zonotopes of two datasets");
    hd_cmd->add_option("--input-a", hd_opts.input, "first CSV dataset")->required();
    hd_cmd->add_option("--input-b", hd_input_b, "second CSV dataset")->required();
    hd_cmd->add_flag("--has-header", hd_opts.has_header, "skip the first CSV line");
    hd_cmd->add_option("--budget", hd_budget, "direction budget (>= 2*dim)");
    hd_cmd->add_option("--seed", hd_opts.seed, "RNG seed");
    hd_cmd->add_option("--threads", hd_opts.threads, "worker threads (0 = all)")
        ->envname("ZONOGINI_THREADS");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        nlohmann::json j;
        j["error"] = "Usage";
        j["message"] = e.what();
        err << j.dump() << "\n";
        return kExitUsage;
    }

    try {
        if (gini_cmd->parsed()) {
            const auto mu =
                EmpiricalMeasure::from_rows(read_csv_file(gini_opts.input, gini_opts.has_header));
            GiniOptions o;
            o.method = detail::parse_gini_method(gini_opts.method);
            o.mc_tuples = gini_opts.tuples;
            o.seed = gini_opts.seed;
            o.exact_guard = gini_opts.guard;
            o.threads = gini_opts.threads;
            out << detail::gini_json(gini_volume(mu, o)).dump() << "\n";
            return kExitOk;
        }

        if (vol_cmd->parsed()) {
            VolumeResult v;
            if (!vol_opts.dist_spec.empty()) {
                const auto dist = parse_distribution(vol_opts.dist_spec);
                v = mc_volume(dist, dist.dim(), vol_opts.tuples, vol_opts.seed, vol_opts.threads);
            } else if (!vol_opts.input.empty()) {
                const auto mu = EmpiricalMeasure::from_rows(
                    read_csv_file(vol_opts.input, vol_opts.has_header));
                const auto z = total_zonotope(mu);
                GiniMethod method = detail::parse_gini_method(vol_opts.method);
                if (method == GiniMethod::automatic)
                    method = mu.dim() == 2 ? GiniMethod::fast2d : GiniMethod::exact;
                switch (method) {
                    case GiniMethod::exact:
                        v = exact_volume(z, vol_opts.guard, vol_opts.threads);
                        break;
                    case GiniMethod::fast2d:
                        v = fast_volume_2d(z);
                        break;
                    case GiniMethod::mc: {
                        v = mc_volume_empirical(mu, vol_opts.tuples, vol_opts.seed,
                                                vol_opts.threads);
                        const double homothety = std::pow(static_cast<double>(mu.size()),
                                                          static_cast<double>(mu.dim()));
                        v.value *= homothety;
                        if (v.stderr_) *v.stderr_ *= homothety;
                        break;
                    }
                    default:
                        break;
                }
            } else {
                fail(errc::invalid_argument, "volume: provide --input or --dist");
            }
            out << detail::volume_json(v).dump() << "\n";
            return kExitOk;
        }

        if (lor_cmd->parsed()) {
            LorenzCurve curve;
            if (!lor_opts.dist_spec.empty()) {
                curve = lorenz_curve(parse_distribution(lor_opts.dist_spec), lor_grid);
            } else if (!lor_opts.input.empty()) {
                const auto mu = EmpiricalMeasure::from_rows(
                    read_csv_file(lor_opts.input, lor_opts.has_header));
                curve = lorenz_curve(mu, lor_grid);
            } else {
                fail(errc::invalid_argument, "lorenz: provide --input or --dist");
            }
            if (lor_dual) curve = curve.dual();
            auto emit = [&curve](std::ostream& os) {
                os << "t,value\n";
                for (const auto& [t, v] : curve.nodes)
                    os << format_double(t) << "," << format_double(v) << "\n";
            };
            if (lor_output.empty()) {
                emit(out);
            } else {
                std::ofstream f(lor_output);
                if (!f) fail(errc::invalid_argument, "cannot open output file: " + lor_output);
                emit(f);
            }
            return kExitOk;
        }

        if (gc_cmd->parsed()) {
            std::vector<std::size_t> schedule;
            for (auto part : detail::split(gc_schedule_str, ',')) {
                const double v = detail::parse_number(part, "schedule entry");
                if (!(v >= 1.0 && v <= 1e15 && v == std::floor(v)))
                    fail(errc::invalid_schedule,
                         "schedule entries must be positive integers, got '" +
                             std::string(part) + "'");
                schedule.push_back(static_cast<std::size_t>(v));
            }
            const auto dist = parse_distribution(gc_opts_cli.dist_spec);
            const auto trace = gc_experiment(dist, schedule, gc_trials, gc_opts_cli.seed, gc_opts);
            const auto summary = summarize(trace);

            nlohmann::json j;
            j["distribution"] = trace.distribution;
            j["schedule"] = trace.schedule;
            j["trials"] = trace.trials;
            j["seed"] = trace.seed;
            j["reference_gini"] = trace.reference_gini;
            j["reference_stderr"] = trace.reference_stderr;
            j["cells"] = nlohmann::json::array();
            for (const auto& cell : trace.cells) {
                nlohmann::json c;
                c["n"] = cell.n;
                c["trial"] = cell.trial;
                c["defined"] = cell.gini.has_value();
                c["gini"] = cell.gini ? nlohmann::json(*cell.gini) : nlohmann::json(nullptr);
                c["hausdorff"] =
                    cell.hausdorff ? nlohmann::json(*cell.hausdorff) : nlohmann::json(nullptr);
                j["cells"].push_back(std::move(c));
            }
            nlohmann::json s;
            s["per_n"] = nlohmann::json::array();
            for (const auto& row : summary.per_n) {
                nlohmann::json r;
                r["n"] = row.n;
                r["gini"] = detail::column_json(row.gini);
                r["abs_err_median"] = row.abs_err_median;
                r["hausdorff"] = detail::column_json(row.hausdorff);
                s["per_n"].push_back(std::move(r));
            }
            s["abs_err_median_strictly_decreasing"] = summary.abs_err_median_strictly_decreasing;
            s["hausdorff_median_non_increasing"] = summary.hausdorff_median_non_increasing;
            j["summary"] = std::move(s);
            out << j.dump() << "\n";

            if (!gc_csv_path.empty()) {
                std::ofstream f(gc_csv_path);
                if (!f) fail(errc::invalid_argument, "cannot open output file: " + gc_csv_path);
                f << "n,gini_count,gini_mean,gini_median,gini_std,gini_min,gini_max,"
                     "abs_err_median,hausdorff_median,hausdorff_mean\n";
                for (const auto& row : summary.per_n) {
                    f << row.n << "," << row.gini.count << "," << format_double(row.gini.mean)
                      << "," << format_double(row.gini.median) << ","
                      << format_double(row.gini.stddev) << "," << format_double(row.gini.min)
                      << "," << format_double(row.gini.max) << ","
                      << format_double(row.abs_err_median) << ","
                      << format_double(row.hausdorff.median) << ","
                      << format_double(row.hausdorff.mean) << "\n";
                }
            }
            return kExitOk;
        }

        if (hd_cmd->parsed()) {
            const auto mu_a =
                EmpiricalMeasure::from_rows(read_csv_file(hd_opts.input, hd_opts.has_header));
            const auto mu_b =
                EmpiricalMeasure::from_rows(read_csv_file(hd_input_b, hd_opts.has_header));
            const auto est = hausdorff_estimate(mean_zonotope(mu_a), mean_zonotope(mu_b),
                                                hd_budget, hd_opts.seed, hd_opts.threads);
            nlohmann::json j;
            j["lower_bound"] = est.lower_bound;
            j["directions_used"] = est.directions_used;
            out << j.dump() << "\n";
            return kExitOk;
        }
    } catch (const CsvError& e) {
        nlohmann::json j;
        j["error"] = errc_name(e.code());
        j["message"] = e.what();
        j["row"] = e.row();
        j["col"] = e.col();
        err << j.dump() << "\n";
        return kExitData;
    } catch (const Error& e) {
        nlohmann::json j;
        j["error"] = errc_name(e.code());
        j["message"] = e.what();
        err << j.dump() << "\n";
        if (e.code() == errc::combination_overflow) return kExitGuard;
        if (e.code() == errc::invalid_argument || e.code() == errc::invalid_schedule)
            return kExitUsage;
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace zonogini::cli
