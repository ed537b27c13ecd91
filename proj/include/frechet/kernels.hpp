#pragma once

// Discrete Fréchet distance kernels.
//
// All variants solve M_ij = max(min(M_{i-1,j}, M_{i-1,j-1}, M_{i,j-1}), d_ij)
// with M_PQ the answer. The recurrence only selects among d_ij values, so
// every variant returns the same bits for the same inputs.

#include <concepts>
#include <cstddef>
#include <iterator>
#include <limits>
#include <new>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/combinators.hpp"
#include "frechet/curve.hpp"
#include "frechet/distance_matrix.hpp"
#include "frechet/error.hpp"
#include "frechet/metric.hpp"

namespace frechet {

/// Working row of the linear-memory kernels. After consuming row i it holds
/// the Fréchet distances of the prefix pairs (p[0..i], q[0..j]) for every j.
template <class T>
using StateRow = std::vector<T>;

/// Pulls rows from a RowSource as an input range, so the source can be folded.
template <RowSource S>
class SourceRange {
public:
    using T = typename S::value_type;

    class iterator {
    public:
        using value_type = std::span<const T>;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(S* s) : s_(s) { advance(); }

        value_type operator*() const { return cur_; }
        iterator& operator++() {
            advance();
            return *this;
        }
        void operator++(int) { advance(); }

        friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

    private:
        void advance() {
            if (s_->remaining() > 0) {
                cur_ = s_->next();
            } else {
                done_ = true;
            }
        }

        S* s_ = nullptr;
        value_type cur_{};
        bool done_ = false;
    };

    explicit SourceRange(S& s) : s_(&s) {}

    iterator begin() { return iterator(s_); }
    std::default_sentinel_t end() const { return {}; }

private:
    S* s_;
};

/// max(min(acc, b), x) for the element pair (b, x).
template <class T>
[[nodiscard]] constexpr T frechet_maxmin(T acc, const std::pair<T, T>& bx) noexcept {
    return max_op(min_op(acc, bx.first), bx.second);
}

/// Advances state row `a` by distance row `x`, in place.
///
/// The element-wise min of neighbouring entries is taken from the values
/// before the update (right to left), then a scan of frechet_maxmin seeded
/// with max(a[0], x[0]) runs over the zipped (min, x) pairs.
template <class T>
void frechet_next_inplace(std::span<T> a, std::span<const T> x) {
    if (a.size() != x.size() || a.empty()) {
        throw DimensionError("frechet_next: state row and distance row must have equal nonzero length, got "
                             + std::to_string(a.size()) + " and " + std::to_string(x.size()));
    }
    for (std::size_t j = a.size() - 1; j > 0; --j) {
        a[j] = min_op(a[j - 1], a[j]);
    }
    auto zipped = std::views::iota(std::size_t{1}, a.size())
                | std::views::transform([&](std::size_t j) { return std::pair<T, T>{a[j], x[j]}; });
    scan_into(frechet_maxmin<T>, max_op(a[0], x[0]), zipped, a.begin());
}

template <class T>
[[nodiscard]] StateRow<T> frechet_next(std::span<const T> a, std::span<const T> x) {
    StateRow<T> out(a.begin(), a.end());
    frechet_next_inplace(std::span<T>(out), x);
    return out;
}

/// The fold/scan formulation over lazily produced rows. `workspace` ends up
/// holding exactly Q slots: the final state row.
template <RowSource S, class T = typename S::value_type>
[[nodiscard]] T frechet_fast(S& rows, StateRow<T>& workspace) {
    if (rows.remaining() == 0 || rows.cols() == 0) {
        throw Error("frechet_fast: empty row source");
    }
    const std::span<const T> first = rows.next();
    workspace.resize(first.size());
    scan_into(max_op, first[0], first.subspan(1), workspace.begin());

    auto next = [](StateRow<T> v, std::span<const T> x) {
        frechet_next_inplace(std::span<T>(v), x);
        return v;
    };
    workspace = fold(next, std::move(workspace), SourceRange<S>(rows));
    return workspace.back();
}

template <RowSource S, class T = typename S::value_type>
[[nodiscard]] T frechet_fast(S& rows) {
    StateRow<T> workspace;
    return frechet_fast(rows, workspace);
}

template <RowSource S, class T = typename S::value_type>
[[nodiscard]] T frechet_fast(S&& rows) {
    return frechet_fast(rows);
}

/// Fused single-row kernel; metric evaluated per element, O(Q) state.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T frechet_linear(const Curve<T>& p, const Curve<T>& q, const M& m, StateRow<T>& workspace) {
    require_same_dim(p, q);
    const std::size_t cols = q.size();
    workspace.resize(cols);
    T* v = workspace.data();

    {
        const auto p0 = p[0];
        v[0] = static_cast<T>(m(p0, q[0]));
        for (std::size_t j = 1; j < cols; ++j) {
            v[j] = max_op(v[j - 1], static_cast<T>(m(p0, q[j])));
        }
    }
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto pi = p[i];
        T left_old = v[0];
        v[0] = max_op(v[0], static_cast<T>(m(pi, q[0])));
        for (std::size_t j = 1; j < cols; ++j) {
            const T old = v[j];
            v[j] = max_op(min_op(v[j - 1], min_op(left_old, old)), static_cast<T>(m(pi, q[j])));
            left_old = old;
        }
    }
    return v[cols - 1];
}

template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T frechet_linear(const Curve<T>& p, const Curve<T>& q, const M& m) {
    StateRow<T> workspace;
    return frechet_linear(p, q, m, workspace);
}

/// Bottom-up fill of the full P x Q table with explicit boundary branches.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T frechet_full_matrix(const Curve<T>& p, const Curve<T>& q, const M& m) {
    require_same_dim(p, q);
    const std::size_t rows = p.size();
    const std::size_t cols = q.size();
    if (rows > std::numeric_limits<std::size_t>::max() / cols) {
        throw LimitError("frechet_full_matrix: table size overflows");
    }
    std::vector<T> table;
    try {
        table.resize(rows * cols);
    } catch (const std::bad_alloc&) {
        throw LimitError("frechet_full_matrix: cannot allocate a " + std::to_string(rows) + " x "
                         + std::to_string(cols) + " table; use frechet_linear");
    }
    auto at = [&](std::size_t i, std::size_t j) -> T& { return table[i * cols + j]; };

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const T d = static_cast<T>(m(p[i], q[j]));
            if (i == 0 && j == 0) {
                at(i, j) = d;
            } else if (i > 0 && j == 0) {
                at(i, j) = max_op(at(i - 1, 0), d);
            } else if (i == 0 && j > 0) {
                at(i, j) = max_op(at(0, j - 1), d);
            } else {
                at(i, j) = max_op(min_op(min_op(at(i - 1, j), at(i - 1, j - 1)), at(i, j - 1)), d);
            }
        }
    }
    return at(rows - 1, cols - 1);
}

/// Overwrites `d` with the DP table: first column and first row become running
/// maxima, the interior follows the recurrence without boundary branches.
template <class T>
[[nodiscard]] T frechet_inplace(DistanceMatrix<T>& d) {
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    for (std::size_t i = 1; i < rows; ++i) {
        d(i, 0) = max_op(d(i - 1, 0), d(i, 0));
    }
    auto first = d.row(0);
    scan_into(max_op, first[0], first.subspan(1), first.begin());

    for (std::size_t i = 1; i < rows; ++i) {
        for (std::size_t j = 1; j < cols; ++j) {
            d(i, j) = max_op(min_op(min_op(d(i - 1, j), d(i - 1, j - 1)), d(i, j - 1)), d(i, j));
        }
    }
    return d(rows - 1, cols - 1);
}

inline constexpr std::size_t default_recursion_limit = 10'000;

namespace detail {

template <std::floating_point T, class M>
class RecursiveFrechet {
public:
    RecursiveFrechet(const Curve<T>& p, const Curve<T>& q, const M& m)
        : p_(p), q_(q), m_(m), memo_(p.size() * q.size(), T(-1)) {}

    T eval(std::size_t i, std::size_t j) {
        T& cell = memo_[i * q_.size() + j];
        if (cell > T(-1)) {
            return cell;
        }
        const T d = static_cast<T>(m_(p_[i], q_[j]));
        if (i == 0 && j == 0) {
            cell = d;
        } else if (i > 0 && j == 0) {
            cell = max_op(eval(i - 1, 0), d);
        } else if (i == 0 && j > 0) {
            cell = max_op(eval(0, j - 1), d);
        } else {
            cell = max_op(min_op(min_op(eval(i - 1, j), eval(i - 1, j - 1)), eval(i, j - 1)), d);
        }
        return cell;
    }

private:
    const Curve<T>& p_;
    const Curve<T>& q_;
    const M& m_;
    std::vector<T> memo_;
};

} // namespace detail

/// Top-down memoized recursion. Reference only: recursion depth reaches
/// P + Q - 1, so inputs with P + Q > `max_points` are refused.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T frechet_recursive(const Curve<T>& p, const Curve<T>& q, const M& m,
                                  std::size_t max_points = default_recursion_limit) {
    require_same_dim(p, q);
    if (p.size() + q.size() > max_points) {
        throw LimitError("frechet_recursive: " + std::to_string(p.size() + q.size())
                         + " combined points exceed the recursion limit of "
                         + std::to_string(max_points) + "; use frechet_linear or frechet_fast");
    }
    detail::RecursiveFrechet<T, M> solver(p, q, m);
    return solver.eval(p.size() - 1, q.size() - 1);
}

inline constexpr std::size_t bruteforce_max_points = 14;

namespace detail {

template <class T>
struct CouplingSearch {
    const DistanceMatrix<T>& d;
    T best;
    bool found = false;

    void walk(std::size_t i, std::size_t j, T worst) {
        worst = max_op(worst, d(i, j));
        if (i + 1 == d.rows() && j + 1 == d.cols()) {
            if (!found || worst < best) {
                best = worst;
                found = true;
            }
            return;
        }
        if (i + 1 < d.rows()) {
            walk(i + 1, j, worst);
        }
        if (j + 1 < d.cols()) {
            walk(i, j + 1, worst);
        }
        if (i + 1 < d.rows() && j + 1 < d.cols()) {
            walk(i + 1, j + 1, worst);
        }
    }
};

} // namespace detail

/// Minimum over every monotone coupling of the largest matched distance,
/// by exhaustive enumeration. Verification oracle; P + Q <= 14.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T frechet_bruteforce(const Curve<T>& p, const Curve<T>& q, const M& m) {
    require_same_dim(p, q);
    if (p.size() + q.size() > bruteforce_max_points) {
        throw LimitError("frechet_bruteforce: P + Q = " + std::to_string(p.size() + q.size())
                         + " exceeds the enumeration limit of "
                         + std::to_string(bruteforce_max_points));
    }
    const auto d = distance_matrix(p, q, m);
    detail::CouplingSearch<T> search{d, T(0)};
    search.walk(0, 0, d(0, 0));
    return search.best;
}

/// Discrete Hausdorff distance over the curves' vertices.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T hausdorff_discrete(const Curve<T>& p, const Curve<T>& q, const M& m) {
    require_same_dim(p, q);
    const auto d = distance_matrix(p, q, m);
    T result = T(0);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        result = max_op(result, fold_same(min_op, d.row(i)));
    }
    for (std::size_t j = 0; j < d.cols(); ++j) {
        T nearest = d(0, j);
        for (std::size_t i = 1; i < d.rows(); ++i) {
            nearest = min_op(nearest, d(i, j));
        }
        result = max_op(result, nearest);
    }
    return result;
}

} // namespace frechet
