#pragma once

// Batched Fréchet distance of B curves against one reference curve.
//
// Curves are padded to a common length P~ by repeating their last point (a
// repeated point never changes the Fréchet distance) and stored lane-major,
// P~ x B x D, so that for a fixed row i the points of consecutive lanes are
// contiguous. The kernel walks i over P~, j over Q and lanes innermost; the
// sequential dependency along j never crosses lanes.
//
// Lane loops are marked `unroll 1`: GCC fully unrolls short fixed-count loops
// before the loop vectorizer runs, which leaves W <= 8 groups scalar.

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstddef>
#include <exception>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "frechet/combinators.hpp"
#include "frechet/curve.hpp"
#include "frechet/error.hpp"
#include "frechet/metric.hpp"

namespace frechet {

template <std::floating_point T>
class CurveBatch {
public:
    CurveBatch(std::size_t lanes, std::size_t padded_length, std::size_t dim, std::vector<T> data,
               std::vector<std::size_t> original_lengths, std::vector<std::size_t> permutation)
        : lanes_(lanes),
          padded_length_(padded_length),
          dim_(dim),
          data_(std::move(data)),
          original_lengths_(std::move(original_lengths)),
          permutation_(std::move(permutation)) {
        if (data_.size() != lanes_ * padded_length_ * dim_ || original_lengths_.size() != lanes_
            || permutation_.size() != lanes_) {
            throw DimensionError("inconsistent curve batch layout");
        }
    }

    [[nodiscard]] std::size_t lanes() const noexcept { return lanes_; }
    [[nodiscard]] std::size_t padded_length() const noexcept { return padded_length_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    /// Flat P~ x B x D tensor.
    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

    /// Points of lanes [first, first + n) at row i, n * D contiguous values.
    [[nodiscard]] const T* row_block(std::size_t i, std::size_t first_lane) const noexcept {
        return data_.data() + (i * lanes_ + first_lane) * dim_;
    }

    [[nodiscard]] std::span<const T> point(std::size_t i, std::size_t lane) const noexcept {
        return {row_block(i, lane), dim_};
    }

    [[nodiscard]] std::span<const std::size_t> original_lengths() const noexcept { return original_lengths_; }

    /// permutation()[lane] is the input position of the curve held by `lane`.
    [[nodiscard]] std::span<const std::size_t> permutation() const noexcept { return permutation_; }

private:
    std::size_t lanes_;
    std::size_t padded_length_;
    std::size_t dim_;
    std::vector<T> data_;
    std::vector<std::size_t> original_lengths_;
    std::vector<std::size_t> permutation_;
};

namespace detail {

inline void require_permutation(std::span<const std::size_t> perm) {
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t k : perm) {
        if (k >= perm.size() || seen[k]) {
            throw Error("batch permutation is not a bijection");
        }
        seen[k] = true;
    }
}

} // namespace detail

/// Packs `curves` into lanes in the given order; `permutation[lane]` records the
/// input position each lane's result belongs to.
template <std::floating_point T>
[[nodiscard]] CurveBatch<T> pad_batch(std::span<const Curve<T>> curves, std::vector<std::size_t> permutation) {
    if (curves.empty()) {
        throw Error("pad_batch: empty batch");
    }
    if (permutation.size() != curves.size()) {
        throw DimensionError("pad_batch: permutation size does not match the batch");
    }
    detail::require_permutation(permutation);
    const std::size_t dim = curves.front().dim();
    std::size_t padded = 0;
    std::vector<std::size_t> lengths;
    lengths.reserve(curves.size());
    for (const auto& c : curves) {
        if (c.dim() != dim) {
            throw DimensionError("pad_batch: mixed curve dimensions");
        }
        lengths.push_back(c.size());
        padded = std::max(padded, c.size());
    }

    const std::size_t lanes = curves.size();
    std::vector<T> data(padded * lanes * dim);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
        const auto& c = curves[lane];
        for (std::size_t i = 0; i < padded; ++i) {
            const auto src = c[std::min(i, c.size() - 1)];
            std::copy(src.begin(), src.end(), data.begin() + static_cast<std::ptrdiff_t>((i * lanes + lane) * dim));
        }
    }
    return CurveBatch<T>(lanes, padded, dim, std::move(data), std::move(lengths), std::move(permutation));
}

template <std::floating_point T>
[[nodiscard]] CurveBatch<T> pad_batch(std::span<const Curve<T>> curves) {
    std::vector<std::size_t> identity(curves.size());
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    return pad_batch(curves, std::move(identity));
}

template <std::floating_point T>
struct SortedCurves {
    std::vector<Curve<T>> curves;
    /// permutation[k] is the input position of curves[k].
    std::vector<std::size_t> permutation;
};

/// Stable sort by point count, non-decreasing.
template <std::floating_point T>
[[nodiscard]] SortedCurves<T> sort_by_length(std::span<const Curve<T>> curves) {
    std::vector<std::size_t> order(curves.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return curves[a].size() < curves[b].size(); });
    SortedCurves<T> out;
    out.curves.reserve(curves.size());
    for (std::size_t k : order) {
        out.curves.push_back(curves[k]);
    }
    out.permutation = std::move(order);
    return out;
}

/// Total number of repeated points when `lengths` are cut into consecutive
/// chunks of `chunk_size` and each chunk is padded to its longest member.
[[nodiscard]] inline std::size_t padding_waste(std::span<const std::size_t> lengths, std::size_t chunk_size) {
    if (chunk_size == 0) {
        throw Error("padding_waste: chunk size must be at least 1");
    }
    std::size_t waste = 0;
    for (std::size_t first = 0; first < lengths.size(); first += chunk_size) {
        const auto chunk = lengths.subspan(first, std::min(chunk_size, lengths.size() - first));
        const std::size_t longest = *std::max_element(chunk.begin(), chunk.end());
        for (std::size_t len : chunk) {
            waste += longest - len;
        }
    }
    return waste;
}

namespace detail {

/// Distances from `n` consecutive lane points to `qj`, fixed count when W > 0.
template <std::size_t W, class T, class M>
inline void eval_lanes(const M& m, const T* pts, std::size_t dim, std::span<const T> qj, T* out,
                       std::size_t n) {
    if constexpr (W > 0 && requires { m.template eval_lanes<W>(pts, qj, out); }) {
        m.template eval_lanes<W>(pts, qj, out);
    } else {
        const std::size_t count = W > 0 ? W : n;
        #pragma GCC unroll 1
        for (std::size_t k = 0; k < count; ++k) {
            out[k] = static_cast<T>(m(std::span<const T>(pts + k * dim, dim), qj));
        }
    }
}

inline constexpr std::size_t max_static_lanes = 64;

/// Runs the Fréchet recurrence for lanes [first, first + n) of `batch`.
/// `v` holds Q * n slots laid out j-major, lanes contiguous per j.
/// W > 0 fixes n = W at compile time so the lane loops vectorize.
template <std::size_t W, class T, class M>
void frechet_lane_group(const CurveBatch<T>& batch, std::size_t first, std::size_t n, const Curve<T>& q,
                        const M& m, T* v) {
    constexpr std::size_t cap = W > 0 ? W : max_static_lanes;
    const std::size_t lanes = W > 0 ? W : n;
    const std::size_t cols = q.size();
    const std::size_t dim = batch.dim();
    alignas(64) T d[cap];
    alignas(64) T left_old[cap];

    const T* pts = batch.row_block(0, first);
    eval_lanes<W>(m, pts, dim, q[0], d, lanes);
    #pragma GCC unroll 1
    for (std::size_t k = 0; k < lanes; ++k) {
        v[k] = d[k];
    }
    for (std::size_t j = 1; j < cols; ++j) {
        eval_lanes<W>(m, pts, dim, q[j], d, lanes);
        T* vj = v + j * lanes;
        const T* vl = vj - lanes;
        #pragma GCC unroll 1
        for (std::size_t k = 0; k < lanes; ++k) {
            vj[k] = max_op(vl[k], d[k]);
        }
    }

    for (std::size_t i = 1; i < batch.padded_length(); ++i) {
        pts = batch.row_block(i, first);
        eval_lanes<W>(m, pts, dim, q[0], d, lanes);
        #pragma GCC unroll 1
        for (std::size_t k = 0; k < lanes; ++k) {
            left_old[k] = v[k];
            v[k] = max_op(v[k], d[k]);
        }
        for (std::size_t j = 1; j < cols; ++j) {
            eval_lanes<W>(m, pts, dim, q[j], d, lanes);
            T* vj = v + j * lanes;
            const T* vl = vj - lanes;
            #pragma GCC unroll 1
            for (std::size_t k = 0; k < lanes; ++k) {
                const T old = vj[k];
                vj[k] = max_op(min_op(vl[k], min_op(left_old[k], old)), d[k]);
                left_old[k] = old;
            }
        }
    }
}

/// Calls `run.template operator()<W>(first, n, offset)` for every lane group,
/// where `offset` is the group's start inside a B * Q workspace.
template <class Run>
void for_each_lane_group(std::size_t lanes, std::size_t cols, std::size_t lane_width, Run&& run) {
    for (std::size_t first = 0; first < lanes; first += lane_width) {
        const std::size_t n = std::min(lane_width, lanes - first);
        const std::size_t offset = first * cols;
        auto dispatch = [&]<std::size_t W>() {
            if (n == W) {
                run.template operator()<W>(first, n, offset);
                return true;
            }
            return false;
        };
        if (!(dispatch.template operator()<1>() || dispatch.template operator()<4>()
              || dispatch.template operator()<8>() || dispatch.template operator()<16>()
              || dispatch.template operator()<32>() || dispatch.template operator()<64>())) {
            for (std::size_t sub = 0; sub < n; sub += max_static_lanes) {
                const std::size_t m = std::min(max_static_lanes, n - sub);
                run.template operator()<0>(first + sub, m, (first + sub) * cols);
            }
        }
    }
}

template <std::floating_point T>
void require_batch_args(const CurveBatch<T>& batch, const Curve<T>& q, std::size_t lane_width) {
    if (batch.dim() != q.dim()) {
        throw DimensionError("batch dimension " + std::to_string(batch.dim())
                             + " differs from reference dimension " + std::to_string(q.dim()));
    }
    if (lane_width == 0) {
        throw Error("lane_width must be at least 1");
    }
}

} // namespace detail

/// Fréchet distance of every lane to `q`, returned in input order (the batch
/// permutation is undone). `workspace` ends up holding exactly B * Q slots,
/// the lane state rows.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] std::vector<T> frechet_batch(const CurveBatch<T>& batch, const Curve<T>& q, const M& m,
                                           std::size_t lane_width, std::vector<T>& workspace) {
    detail::require_batch_args(batch, q, lane_width);
    const std::size_t lanes = batch.lanes();
    const std::size_t cols = q.size();
    workspace.resize(lanes * cols);

    std::vector<T> out(lanes);
    detail::for_each_lane_group(lanes, cols, lane_width,
                                [&]<std::size_t W>(std::size_t first, std::size_t n, std::size_t offset) {
                                    T* v = workspace.data() + offset;
                                    detail::frechet_lane_group<W>(batch, first, n, q, m, v);
                                    const T* last = v + (cols - 1) * n;
                                    for (std::size_t k = 0; k < n; ++k) {
                                        out[batch.permutation()[first + k]] = last[k];
                                    }
                                });
    return out;
}

template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] std::vector<T> frechet_batch(const CurveBatch<T>& batch, const Curve<T>& q, const M& m,
                                           std::size_t lane_width = 32) {
    std::vector<T> workspace;
    return frechet_batch(batch, q, m, lane_width, workspace);
}

namespace detail {

/// Runs `task(k)` for k in [0, count) on `workers` threads; rethrows the first failure.
template <class Task>
void run_indexed(std::size_t count, std::size_t workers, Task&& task) {
    if (workers == 0) {
        throw Error("workers must be at least 1");
    }
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            task(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic_flag error_set = ATOMIC_FLAG_INIT;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < count && !failed; k = next.fetch_add(1)) {
                    try {
                        task(k);
                    } catch (...) {
                        if (!error_set.test_and_set()) {
                            error = std::current_exception();
                        }
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace detail

/// Evaluates independent batches on `workers` threads. Results are the
/// per-batch outputs concatenated in batch order, identical for any worker count.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] std::vector<T> frechet_batch_parallel(std::span<const CurveBatch<T>> batches, const Curve<T>& q,
                                                    const M& m, std::size_t workers,
                                                    std::size_t lane_width = 32) {
    std::vector<std::size_t> offsets(batches.size() + 1, 0);
    for (std::size_t b = 0; b < batches.size(); ++b) {
        detail::require_batch_args(batches[b], q, lane_width);
        offsets[b + 1] = offsets[b] + batches[b].lanes();
    }
    std::vector<T> out(offsets.back());
    detail::run_indexed(batches.size(), workers, [&](std::size_t b) {
        std::vector<T> workspace;
        const auto part = frechet_batch(batches[b], q, m, lane_width, workspace);
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(offsets[b]));
    });
    return out;
}

struct ParallelOptions {
    std::size_t workers = 1;
    std::size_t lane_width = 32;
    /// Curves per independent batch; 0 selects lane_width * 8.
    std::size_t chunk_size = 0;
    /// Sort by length before chunking to reduce padding.
    bool sort = false;
};

/// Chunks `curves` into batches, evaluates them on `opts.workers` threads and
/// returns one distance per curve in input order.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] std::vector<T> frechet_batch_parallel(std::span<const Curve<T>> curves, const Curve<T>& q,
                                                    const M& m, const ParallelOptions& opts = {}) {
    if (opts.lane_width == 0) {
        throw Error("lane_width must be at least 1");
    }
    for (const auto& c : curves) {
        require_same_dim(c, q);
    }
    const std::size_t chunk = opts.chunk_size == 0 ? opts.lane_width * 8 : opts.chunk_size;

    std::vector<std::size_t> order(curves.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (opts.sort) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return curves[a].size() < curves[b].size(); });
    }

    const std::size_t chunks = (curves.size() + chunk - 1) / chunk;
    std::vector<T> out(curves.size());
    detail::run_indexed(chunks, opts.workers, [&](std::size_t c) {
        const std::size_t first = c * chunk;
        const std::size_t n = std::min(chunk, curves.size() - first);
        std::vector<Curve<T>> members;
        members.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            members.push_back(curves[order[first + k]]);
        }
        std::vector<std::size_t> perm(order.begin() + static_cast<std::ptrdiff_t>(first),
                                      order.begin() + static_cast<std::ptrdiff_t>(first + n));
        // Lanes map straight into `out`, so the batch holds a local identity.
        const auto batch = pad_batch(std::span<const Curve<T>>(members));
        std::vector<T> workspace;
        const auto part = frechet_batch(batch, q, m, opts.lane_width, workspace);
        for (std::size_t k = 0; k < n; ++k) {
            out[perm[k]] = part[k];
        }
    });
    return out;
}

} // namespace frechet
