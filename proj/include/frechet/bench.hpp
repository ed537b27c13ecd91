#pragma once

// Benchmark harness: two sweeps over random-walk data (vary the number of
// curves, vary the curve length), a throughput baseline that only sums the
// distance matrix, and the bench CSV writer.

#include <chrono>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frechet/batch.hpp"
#include "frechet/curve.hpp"
#include "frechet/curve_csv.hpp"
#include "frechet/distance_matrix.hpp"
#include "frechet/error.hpp"
#include "frechet/kernels.hpp"
#include "frechet/metric.hpp"
#include "frechet/random_walk.hpp"

namespace frechet {

/// Per lane, the sum of all P~ x Q distances, walked with the same lane
/// groups and loop order as frechet_batch. Results in input order.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] std::vector<T> baseline_sum(const CurveBatch<T>& batch, const Curve<T>& q, const M& m,
                                          std::size_t lane_width = 32) {
    detail::require_batch_args(batch, q, lane_width);
    const std::size_t cols = q.size();
    const std::size_t dim = batch.dim();
    std::vector<T> out(batch.lanes());
    detail::for_each_lane_group(
        batch.lanes(), cols, lane_width, [&]<std::size_t W>(std::size_t first, std::size_t n, std::size_t) {
            constexpr std::size_t cap = W > 0 ? W : detail::max_static_lanes;
            const std::size_t lanes = W > 0 ? W : n;
            alignas(64) T d[cap];
            alignas(64) T acc[cap];
            #pragma GCC unroll 1
            for (std::size_t k = 0; k < lanes; ++k) {
                acc[k] = T(0);
            }
            for (std::size_t i = 0; i < batch.padded_length(); ++i) {
                const T* pts = batch.row_block(i, first);
                for (std::size_t j = 0; j < cols; ++j) {
                    detail::eval_lanes<W>(m, pts, dim, q[j], d, lanes);
                    #pragma GCC unroll 1
                    for (std::size_t k = 0; k < lanes; ++k) {
                        acc[k] += d[k];
                    }
                }
            }
            #pragma GCC unroll 1
            for (std::size_t k = 0; k < lanes; ++k) {
                out[batch.permutation()[first + k]] = acc[k];
            }
        });
    return out;
}

enum class Experiment { vary_n, vary_p };
enum class Variant { full_matrix, linear, fast, batch, baseline };

[[nodiscard]] constexpr std::string_view to_string(Experiment e) noexcept {
    return e == Experiment::vary_n ? "vary_n" : "vary_p";
}

[[nodiscard]] constexpr std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::full_matrix: return "full_matrix";
        case Variant::linear: return "linear";
        case Variant::fast: return "fast";
        case Variant::batch: return "batch";
        case Variant::baseline: return "baseline";
    }
    return "unknown";
}

/// Accepts both `vary_n` and the CLI spelling `vary-n`.
[[nodiscard]] inline Experiment parse_experiment(std::string_view s) {
    if (s == "vary_n" || s == "vary-n") {
        return Experiment::vary_n;
    }
    if (s == "vary_p" || s == "vary-p") {
        return Experiment::vary_p;
    }
    throw Error("unknown experiment '" + std::string(s) + "'");
}

[[nodiscard]] inline Variant parse_variant(std::string_view s) {
    for (Variant v : {Variant::full_matrix, Variant::linear, Variant::fast, Variant::batch, Variant::baseline}) {
        if (s == to_string(v)) {
            return v;
        }
    }
    if (s == "full-matrix") {
        return Variant::full_matrix;
    }
    throw Error("unknown variant '" + std::string(s) + "'");
}

struct BenchRecord {
    Experiment experiment;
    Variant variant;
    std::size_t n_curves;
    std::size_t curve_len;
    std::size_t lane_width;
    std::size_t repetitions;
    std::size_t warmup_reps;
    double total_seconds;
    double pairs_per_second;
    /// Sum of the distances of one repetition; identical across Fréchet variants.
    double checksum;
};

inline constexpr std::size_t desk_fixed_size = 256;

/// 2^5 .. 2^10
[[nodiscard]] inline std::vector<std::size_t> desk_sizes() { return {32, 64, 128, 256, 512, 1024}; }

/// 2^5 .. 2^14
[[nodiscard]] inline std::vector<std::size_t> full_sizes() {
    std::vector<std::size_t> sizes;
    for (std::size_t s = 32; s <= 16384; s *= 2) {
        sizes.push_back(s);
    }
    return sizes;
}

struct ExperimentConfig {
    Experiment kind = Experiment::vary_n;
    std::vector<Variant> variants{Variant::full_matrix, Variant::linear, Variant::fast, Variant::batch,
                                  Variant::baseline};
    std::vector<std::size_t> sizes = desk_sizes();
    /// Curve length for vary_n, number of curves for vary_p.
    std::size_t fixed = desk_fixed_size;
    std::uint64_t seed = 1;
    std::size_t reps = 3;
    std::size_t warmup = 1;
    std::size_t lane_width = 32;
    std::size_t workers = 1;
};

/// Curves and reference of one benchmark cell: walk 0 is the reference q,
/// walks 1..N are the curves compared against it.
template <std::floating_point T>
struct BenchData {
    std::vector<Curve<T>> curves;
    Curve<T> reference;
};

template <std::floating_point T>
[[nodiscard]] BenchData<T> make_bench_data(std::size_t n_curves, std::size_t curve_len, std::uint64_t seed) {
    auto walks = gen_random_walks<T>(n_curves + 1, curve_len, seed);
    Curve<T> reference = std::move(walks.front());
    walks.erase(walks.begin());
    return {std::move(walks), std::move(reference)};
}

namespace detail {

/// Returns one value per curve (a distance, or a lane sum for the baseline)
/// for the given variant on prepared data.
template <std::floating_point T>
class CellRunner {
public:
    CellRunner(const BenchData<T>& data, const ExperimentConfig& cfg) : data_(data), cfg_(cfg) {
        const std::size_t chunk = cfg.lane_width * 8;
        std::span<const Curve<T>> all(data.curves);
        for (std::size_t first = 0; first < all.size(); first += chunk) {
            batches_.push_back(pad_batch(all.subspan(first, std::min(chunk, all.size() - first))));
        }
    }

    double run(Variant v) {
        const Euclidean m;
        const auto& q = data_.reference;
        double sum = 0.0;
        switch (v) {
            case Variant::full_matrix:
                for (const auto& p : data_.curves) {
                    sum += static_cast<double>(frechet_full_matrix(p, q, m));
                }
                break;
            case Variant::linear:
                for (const auto& p : data_.curves) {
                    sum += static_cast<double>(frechet_linear(p, q, m, state_));
                }
                break;
            case Variant::fast:
                for (const auto& p : data_.curves) {
                    auto rows = row_source(p, q, m);
                    sum += static_cast<double>(frechet_fast(rows, state_));
                }
                break;
            case Variant::batch:
                for (T d : frechet_batch_parallel(std::span<const CurveBatch<T>>(batches_), q, m, cfg_.workers,
                                                  cfg_.lane_width)) {
                    sum += static_cast<double>(d);
                }
                break;
            case Variant::baseline: {
                std::vector<std::vector<T>> parts(batches_.size());
                run_indexed(batches_.size(), cfg_.workers, [&](std::size_t b) {
                    parts[b] = baseline_sum(batches_[b], q, m, cfg_.lane_width);
                });
                for (const auto& part : parts) {
                    for (T s : part) {
                        sum += static_cast<double>(s);
                    }
                }
                break;
            }
        }
        return sum;
    }

private:
    const BenchData<T>& data_;
    const ExperimentConfig& cfg_;
    std::vector<CurveBatch<T>> batches_;
    StateRow<T> state_;
};

} // namespace detail

/// Runs every (size, variant) cell sequentially: `warmup` untimed repetitions,
/// then `reps` timed ones on a monotonic clock. One record per cell.
/// Batch and baseline variants time the evaluation of pre-packed batches.
template <std::floating_point T>
[[nodiscard]] std::vector<BenchRecord> run_experiment(const ExperimentConfig& cfg,
                                                      const std::function<void(const BenchRecord&)>& on_record = {}) {
    if (cfg.sizes.empty()) {
        throw Error("run_experiment: no sizes given");
    }
    if (cfg.reps == 0) {
        throw Error("run_experiment: reps must be at least 1");
    }
    if (cfg.lane_width == 0 || cfg.workers == 0 || cfg.fixed == 0) {
        throw Error("run_experiment: lane width, workers and fixed size must be at least 1");
    }
    std::vector<BenchRecord> records;
    for (std::size_t size : cfg.sizes) {
        if (size == 0) {
            throw Error("run_experiment: sizes must be at least 1");
        }
        const std::size_t n_curves = cfg.kind == Experiment::vary_n ? size : cfg.fixed;
        const std::size_t curve_len = cfg.kind == Experiment::vary_n ? cfg.fixed : size;
        const auto data = make_bench_data<T>(n_curves, curve_len, cfg.seed);
        detail::CellRunner<T> runner(data, cfg);

        for (Variant v : cfg.variants) {
            volatile double sink = 0.0;
            for (std::size_t r = 0; r < cfg.warmup; ++r) {
                sink = runner.run(v);
            }
            double checksum = 0.0;
            const auto start = std::chrono::steady_clock::now();
            for (std::size_t r = 0; r < cfg.reps; ++r) {
                checksum = runner.run(v);
            }
            const auto stop = std::chrono::steady_clock::now();
            sink = checksum;
            (void)sink;
            const double seconds = std::chrono::duration<double>(stop - start).count();
            BenchRecord rec{cfg.kind,
                            v,
                            n_curves,
                            curve_len,
                            cfg.lane_width,
                            cfg.reps,
                            cfg.warmup,
                            seconds,
                            static_cast<double>(n_curves * cfg.reps) / seconds,
                            checksum};
            if (on_record) {
                on_record(rec);
            }
            records.push_back(rec);
        }
    }
    return records;
}

inline constexpr std::string_view bench_csv_header =
    "experiment,variant,n_curves,curve_len,lane_width,reps,warmup,total_seconds,pairs_per_second,checksum";

inline void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << bench_csv_header << '\n';
    for (const auto& r : records) {
        out << to_string(r.experiment) << ',' << to_string(r.variant) << ',' << r.n_curves << ',' << r.curve_len
            << ',' << r.lane_width << ',' << r.repetitions << ',' << r.warmup_reps << ','
            << detail::format_number(r.total_seconds) << ',' << detail::format_number(r.pairs_per_second) << ','
            << detail::format_number(r.checksum) << '\n';
    }
}

inline void write_bench_csv(const std::string& path, std::span<const BenchRecord> records) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write_bench_csv(out, records);
    if (!out) {
        throw Error("I/O error while writing '" + path + "'");
    }
}

} // namespace frechet
