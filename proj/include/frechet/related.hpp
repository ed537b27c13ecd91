#pragma once

// DTW and Levenshtein distance in the same row-scan / row-fold form as the
// Fréchet kernels, plus their textbook full-matrix counterparts.
//
// DTW replaces the outer max of the Fréchet step by a sum. It is not a
// metric: the triangle inequality does not hold in general.

#include <algorithm>
#include <concepts>
#include <functional>
#include <cstddef>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "frechet/combinators.hpp"
#include "frechet/distance_matrix.hpp"
#include "frechet/error.hpp"
#include "frechet/kernels.hpp"

namespace frechet {

/// min(acc, b) + x for the element pair (b, x).
template <class A>
[[nodiscard]] constexpr A dtw_min(A acc, const std::pair<A, A>& bx) noexcept {
    return min_op(acc, bx.first) + bx.second;
}

/// Advances DTW state row `a` (accumulator type A) by distance row `x`.
template <class A, class T>
void dtw_next_inplace(std::span<A> a, std::span<const T> x) {
    if (a.size() != x.size() || a.empty()) {
        throw DimensionError("dtw_next: state row and distance row must have equal nonzero length, got "
                             + std::to_string(a.size()) + " and " + std::to_string(x.size()));
    }
    for (std::size_t j = a.size() - 1; j > 0; --j) {
        a[j] = min_op(a[j - 1], a[j]);
    }
    auto zipped = std::views::iota(std::size_t{1}, a.size()) | std::views::transform([&](std::size_t j) {
                      return std::pair<A, A>{a[j], static_cast<A>(x[j])};
                  });
    scan_into(dtw_min<A>, a[0] + static_cast<A>(x[0]), zipped, a.begin());
}

template <class T>
[[nodiscard]] std::vector<T> dtw_next(std::span<const T> a, std::span<const T> x) {
    std::vector<T> out(a.begin(), a.end());
    dtw_next_inplace(std::span<T>(out), x);
    return out;
}

/// DTW over lazily produced rows with O(Q) state. `Acc` selects the
/// accumulator type (defaults to the row type); pass `double` to sum float
/// distances of long curves in 64 bits.
template <class Acc = void, RowSource S>
[[nodiscard]] auto dtw_distance(S& rows) {
    using T = typename S::value_type;
    using A = std::conditional_t<std::is_void_v<Acc>, T, Acc>;
    if (rows.remaining() == 0 || rows.cols() == 0) {
        throw Error("dtw_distance: empty row source");
    }
    const std::span<const T> first = rows.next();
    std::vector<A> v(first.size());
    scan_into(std::plus<A>{}, static_cast<A>(first[0]),
              first.subspan(1) | std::views::transform([](T x) { return static_cast<A>(x); }), v.begin());

    auto next = [](std::vector<A> a, std::span<const T> x) {
        dtw_next_inplace(std::span<A>(a), x);
        return a;
    };
    v = fold(next, std::move(v), SourceRange<S>(rows));
    return v.back();
}

template <class Acc = void, RowSource S>
    requires(!std::is_lvalue_reference_v<S>)
[[nodiscard]] auto dtw_distance(S&& rows) {
    return dtw_distance<Acc>(rows);
}

/// Full-matrix DP: M_ij = d_ij + min(M_{i-1,j}, M_{i-1,j-1}, M_{i,j-1}).
template <class T>
[[nodiscard]] T dtw_oracle(const DistanceMatrix<T>& d) {
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    std::vector<T> m(rows * cols);
    auto at = [&](std::size_t i, std::size_t j) -> T& { return m[i * cols + j]; };
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            T best;
            if (i == 0 && j == 0) {
                best = T(0);
            } else if (i == 0) {
                best = at(0, j - 1);
            } else if (j == 0) {
                best = at(i - 1, 0);
            } else {
                best = std::min({at(i - 1, j), at(i - 1, j - 1), at(i, j - 1)});
            }
            at(i, j) = (i == 0 && j == 0) ? d(0, 0) : best + d(i, j);
        }
    }
    return at(rows - 1, cols - 1);
}

/// min(a + 1, x)
[[nodiscard]] constexpr std::size_t levenshtein_min(std::size_t a, std::size_t x) noexcept {
    return std::min(a + 1, x);
}

/// Edit distance (unit-cost insert, delete, substitute) via row scans over the
/// 0/1 mismatch matrix d_ij = [p_i != q_j].
///
/// The boundary offsets are the zero-based prefix lengths: the first row is
/// seeded with j + d_0j and row i starts from min(i + d_i0, a_0 + 1).
template <std::ranges::random_access_range R1, std::ranges::random_access_range R2>
    requires(!std::is_array_v<R1> && !std::is_array_v<R2>)
    && std::equality_comparable_with<std::ranges::range_reference_t<R1>, std::ranges::range_reference_t<R2>>
[[nodiscard]] std::size_t levenshtein_distance(const R1& p, const R2& q) {
    const auto rows = static_cast<std::size_t>(std::ranges::size(p));
    const auto cols = static_cast<std::size_t>(std::ranges::size(q));
    if (rows == 0) {
        return cols;
    }
    if (cols == 0) {
        return rows;
    }
    auto mismatch = [&](std::size_t i, std::size_t j) -> std::size_t {
        return std::ranges::begin(p)[i] == std::ranges::begin(q)[j] ? 0 : 1;
    };

    std::vector<std::size_t> v(cols);
    {
        auto seed = std::views::iota(std::size_t{0}, cols)
                  | std::views::transform([&](std::size_t j) { return j + mismatch(0, j); });
        scan_into(levenshtein_min, seed[0], seed | std::views::drop(1), v.begin());
    }

    auto next = [&](std::vector<std::size_t> a, std::size_t i) {
        for (std::size_t j = cols - 1; j > 0; --j) {
            a[j] = std::min(a[j - 1] + mismatch(i, j), a[j] + 1);
        }
        const std::size_t init = std::min(i + mismatch(i, 0), a[0] + 1);
        scan_into(levenshtein_min, init, std::span<const std::size_t>(a).subspan(1), a.begin());
        return a;
    };
    v = fold(next, std::move(v), std::views::iota(std::size_t{1}, rows));
    return v.back();
}

[[nodiscard]] inline std::size_t levenshtein_distance(std::string_view p, std::string_view q) {
    return levenshtein_distance<std::string_view, std::string_view>(p, q);
}

/// Wagner-Fischer full-matrix DP with D[i][0] = i, D[0][j] = j.
template <std::ranges::random_access_range R1, std::ranges::random_access_range R2>
    requires(!std::is_array_v<R1> && !std::is_array_v<R2>)
[[nodiscard]] std::size_t levenshtein_oracle(const R1& p, const R2& q) {
    const auto rows = static_cast<std::size_t>(std::ranges::size(p));
    const auto cols = static_cast<std::size_t>(std::ranges::size(q));
    std::vector<std::size_t> dp((rows + 1) * (cols + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return dp[i * (cols + 1) + j]; };
    for (std::size_t i = 0; i <= rows; ++i) {
        at(i, 0) = i;
    }
    for (std::size_t j = 0; j <= cols; ++j) {
        at(0, j) = j;
    }
    for (std::size_t i = 1; i <= rows; ++i) {
        for (std::size_t j = 1; j <= cols; ++j) {
            const std::size_t sub = std::ranges::begin(p)[i - 1] == std::ranges::begin(q)[j - 1] ? 0 : 1;
            at(i, j) = std::min({at(i - 1, j - 1) + sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
        }
    }
    return at(rows, cols);
}

[[nodiscard]] inline std::size_t levenshtein_oracle(std::string_view p, std::string_view q) {
    return levenshtein_oracle<std::string_view, std::string_view>(p, q);
}

} // namespace frechet
