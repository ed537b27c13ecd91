#pragma once

// Command implementations of the `frechet-cli` tool, kept separate from main()
// so the test suite can drive them in-process.
//
//   gen   --n-points INT --n-curves INT --seed INT --out PATH
//   dist  --p PATH --q PATH --metric NAME --measure {frechet,dtw}
//   bench --experiment LIST --variants LIST --sizes LIST --seed INT --reps INT
//         --warmup INT --lane-width INT --workers INT --precision {f32,f64} --out PATH
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "frechet/frechet.hpp"

namespace frechet::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

/// Thrown for well-formed invocations whose arguments are semantically invalid.
class UsageError : public Error {
public:
    using Error::Error;
};

template <class F>
decltype(auto) with_metric(const std::string& name, F&& f) {
    if (name == Euclidean::name()) {
        return f(Euclidean{});
    }
    if (name == SquaredEuclidean::name()) {
        return f(SquaredEuclidean{});
    }
    if (name == Haversine::name()) {
        return f(Haversine{});
    }
    throw UsageError("unknown metric '" + name + "'");
}

struct GenOptions {
    std::size_t n_points = 0;
    std::size_t n_curves = 1;
    std::uint64_t seed = 0;
    std::string out = "-";
};

struct DistOptions {
    std::string p;
    std::string q;
    std::string metric = "euclidean";
    std::string measure = "frechet";
    std::string precision = "f64";
};

struct BenchOptions {
    std::vector<std::string> experiments{"vary-n", "vary-p"};
    std::vector<std::string> variants{"full_matrix", "linear", "fast", "batch", "baseline"};
    std::vector<std::size_t> sizes;
    std::size_t fixed = 0;
    bool full_scale = false;
    std::uint64_t seed = 1;
    std::size_t reps = 3;
    std::size_t warmup = 1;
    std::size_t lane_width = 32;
    std::size_t workers = 1;
    std::string precision = "f32";
    std::string out = "-";
};

inline int cmd_gen(const GenOptions& opt, std::ostream& out) {
    if (opt.n_points == 0 || opt.n_curves == 0) {
        throw UsageError("--n-points and --n-curves must be at least 1");
    }
    auto walks = gen_random_walks<double>(opt.n_curves, opt.n_points, opt.seed);
    std::vector<NamedCurve<double>> named;
    named.reserve(walks.size());
    for (std::size_t k = 0; k < walks.size(); ++k) {
        named.push_back({"walk" + std::to_string(k), std::move(walks[k])});
    }
    if (opt.out == "-") {
        save_curves_csv(out, std::span<const NamedCurve<double>>(named));
    } else {
        save_curves_csv(opt.out, std::span<const NamedCurve<double>>(named));
    }
    return exit_ok;
}

template <std::floating_point T>
T load_single_curve_distance(const DistOptions& opt) {
    auto load_one = [](const std::string& path) {
        auto curves = load_curves_csv<T>(path);
        if (curves.size() != 1) {
            throw Error(path + ": expected exactly one curve, found " + std::to_string(curves.size()));
        }
        return std::move(curves.front().curve);
    };
    const Curve<T> p = load_one(opt.p);
    const Curve<T> q = load_one(opt.q);
    require_same_dim(p, q);
    return with_metric(opt.metric, [&](auto m) -> T {
        if (opt.measure == "frechet") {
            return frechet_linear(p, q, m);
        }
        if (opt.measure == "dtw") {
            return dtw_distance(row_source(p, q, m));
        }
        throw UsageError("unknown measure '" + opt.measure + "'");
    });
}

/// Prints the distance in the shortest form that round-trips in the active precision.
inline int cmd_dist(const DistOptions& opt, std::ostream& out) {
    if (opt.precision == "f32") {
        out << detail::format_number(load_single_curve_distance<float>(opt)) << '\n';
    } else if (opt.precision == "f64") {
        out << detail::format_number(load_single_curve_distance<double>(opt)) << '\n';
    } else {
        throw UsageError("unknown precision '" + opt.precision + "'");
    }
    return exit_ok;
}

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& log) {
    ExperimentConfig base;
    base.variants.clear();
    try {
        for (const auto& v : opt.variants) {
            base.variants.push_back(parse_variant(v));
        }
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (opt.reps == 0 || opt.lane_width == 0 || opt.workers == 0) {
        throw UsageError("--reps, --lane-width and --workers must be at least 1");
    }
    base.sizes = !opt.sizes.empty() ? opt.sizes : (opt.full_scale ? full_sizes() : desk_sizes());
    base.fixed = opt.fixed != 0 ? opt.fixed : (opt.full_scale ? std::size_t{1024} : desk_fixed_size);
    base.seed = opt.seed;
    base.reps = opt.reps;
    base.warmup = opt.warmup;
    base.lane_width = opt.lane_width;
    base.workers = opt.workers;

    std::vector<ExperimentConfig> configs;
    for (const auto& e : opt.experiments) {
        ExperimentConfig cfg = base;
        try {
            cfg.kind = parse_experiment(e);
        } catch (const Error& err) {
            throw UsageError(err.what());
        }
        configs.push_back(std::move(cfg));
    }

    auto progress = [&](const BenchRecord& r) {
        log << to_string(r.experiment) << ' ' << to_string(r.variant) << " n_curves=" << r.n_curves
            << " curve_len=" << r.curve_len << " pairs/s=" << r.pairs_per_second << '\n';
    };
    std::vector<BenchRecord> records;
    for (const auto& cfg : configs) {
        std::vector<BenchRecord> part;
        if (opt.precision == "f32") {
            part = run_experiment<float>(cfg, progress);
        } else if (opt.precision == "f64") {
            part = run_experiment<double>(cfg, progress);
        } else {
            throw UsageError("unknown precision '" + opt.precision + "'");
        }
        records.insert(records.end(), part.begin(), part.end());
    }
    if (opt.out == "-") {
        write_bench_csv(out, records);
    } else {
        write_bench_csv(opt.out, records);
    }
    return exit_ok;
}

/// Parses `argv` and runs the selected command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Discrete Fréchet distance toolkit: random-walk generation, curve distances, benchmarks"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write random-walk curves as curve CSV");
    gen_cmd->add_option("--n-points", gen.n_points, "Points per curve")->required();
    gen_cmd->add_option("--n-curves", gen.n_curves, "Number of curves")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "SplitMix64 master seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output path, '-' for stdout")->capture_default_str();

    DistOptions dist;
    auto* dist_cmd = app.add_subcommand("dist", "Distance between two single-curve CSV files");
    dist_cmd->add_option("--p", dist.p, "First curve file")->required();
    dist_cmd->add_option("--q", dist.q, "Second curve file")->required();
    dist_cmd->add_option("--metric", dist.metric, "Point metric")
        ->check(CLI::IsMember({"euclidean", "sq-euclidean", "haversine"}))
        ->capture_default_str();
    dist_cmd->add_option("--measure", dist.measure, "Curve measure")
        ->check(CLI::IsMember({"frechet", "dtw"}))
        ->capture_default_str();
    dist_cmd->add_option("--precision", dist.precision, "Scalar type")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark sweeps and write bench CSV");
    bench_cmd->add_option("--experiment", bench.experiments, "vary-n, vary-p, or both")
        ->delimiter(',')
        ->check(CLI::IsMember({"vary-n", "vary-p", "vary_n", "vary_p"}))
        ->capture_default_str();
    bench_cmd->add_option("--variants", bench.variants, "full_matrix,linear,fast,batch,baseline")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--sizes", bench.sizes, "Swept sizes (default 2^5..2^10)")->delimiter(',');
    bench_cmd->add_option("--fixed", bench.fixed, "Curve length for vary-n, curve count for vary-p (default 256)");
    bench_cmd->add_flag("--full-scale", bench.full_scale, "Sweep 2^5..2^14 with the fixed size 2^10");
    bench_cmd->add_option("--seed", bench.seed, "SplitMix64 master seed")->capture_default_str();
    bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per cell")->capture_default_str();
    bench_cmd->add_option("--warmup", bench.warmup, "Untimed repetitions per cell")->capture_default_str();
    bench_cmd->add_option("--lane-width", bench.lane_width, "Lanes per inner step")->capture_default_str();
    bench_cmd->add_option("--workers", bench.workers, "Worker threads for batch variants")->capture_default_str();
    bench_cmd->add_option("--precision", bench.precision, "Scalar type")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Output path, '-' for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*gen_cmd) {
            return cmd_gen(gen, out);
        }
        if (*dist_cmd) {
            return cmd_dist(dist, out);
        }
        return cmd_bench(bench, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace frechet::cli
