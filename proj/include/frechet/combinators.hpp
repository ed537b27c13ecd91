#pragma once

// Left scan and left fold.
//
// scan(f, init, xs) prepends `init` to the running accumulators, so the
// result always has |xs| + 1 elements. The *_same forms take the first
// element of the sequence as the initial value.

#include <functional>
#include <iterator>
#include <ranges>
#include <type_traits>
#include <utility>
#include <vector>

#include "frechet/error.hpp"

namespace frechet {

/// Callable usable as a scan/fold step: `Acc f(Acc, Elem)`. The accumulator
/// is passed as an rvalue so steps over containers can update in place.
template <class F, class Acc, class Elem>
concept BinaryStep = std::regular_invocable<const F&, Acc, Elem>
    && std::convertible_to<std::invoke_result_t<const F&, Acc, Elem>, Acc>;

/// Writes `init, f(init, x0), f(f(init, x0), x1), ...` to `out` and returns
/// the iterator past the last write.
///
/// Every input element is dereferenced before the output position holding its
/// result is written, so `out` may alias the storage a lazy input view reads
/// from as long as output position k+1 corresponds to input element k or
/// later (this is how the row kernels update their state in place).
template <class Acc, std::ranges::input_range R, std::output_iterator<const Acc&> Out, class F>
    requires BinaryStep<F, Acc, std::ranges::range_reference_t<R>>
Out scan_into(const F& f, Acc init, R&& xs, Out out) {
    Acc acc = std::move(init);
    *out = acc;
    ++out;
    for (auto&& x : xs) {
        acc = std::invoke(f, std::move(acc), std::forward<decltype(x)>(x));
        *out = acc;
        ++out;
    }
    return out;
}

template <class Acc, std::ranges::input_range R, class F>
    requires BinaryStep<F, Acc, std::ranges::range_reference_t<R>>
[[nodiscard]] std::vector<Acc> scan(const F& f, Acc init, R&& xs) {
    std::vector<Acc> ys;
    if constexpr (std::ranges::sized_range<R>) {
        ys.reserve(std::ranges::size(xs) + 1);
    }
    scan_into(f, std::move(init), std::forward<R>(xs), std::back_inserter(ys));
    return ys;
}

template <std::ranges::forward_range R, class F,
          class T = std::ranges::range_value_t<R>>
    requires BinaryStep<F, T, std::ranges::range_reference_t<R>>
[[nodiscard]] std::vector<T> scan_same(const F& f, R&& xs) {
    auto first = std::ranges::begin(xs);
    const auto last = std::ranges::end(xs);
    if (first == last) {
        throw Error("scan_same requires nonempty sequence");
    }
    T init = *first;
    ++first;
    return scan(f, std::move(init), std::ranges::subrange(first, last));
}

template <class Acc, std::ranges::input_range R, class F>
    requires BinaryStep<F, Acc, std::ranges::range_reference_t<R>>
[[nodiscard]] Acc fold(const F& f, Acc init, R&& xs) {
    Acc acc = std::move(init);
    for (auto&& x : xs) {
        acc = std::invoke(f, std::move(acc), std::forward<decltype(x)>(x));
    }
    return acc;
}

template <std::ranges::forward_range R, class F,
          class T = std::ranges::range_value_t<R>>
    requires BinaryStep<F, T, std::ranges::range_reference_t<R>>
[[nodiscard]] T fold_same(const F& f, R&& xs) {
    auto first = std::ranges::begin(xs);
    const auto last = std::ranges::end(xs);
    if (first == last) {
        throw Error("fold_same requires nonempty sequence");
    }
    T init = *first;
    ++first;
    return fold(f, std::move(init), std::ranges::subrange(first, last));
}

/// Binary max/min as function objects; `std::max` cannot be passed by name.
struct Max {
    template <class T>
    constexpr T operator()(const T& a, const T& b) const {
        return a < b ? b : a;
    }
};

struct Min {
    template <class T>
    constexpr T operator()(const T& a, const T& b) const {
        return b < a ? b : a;
    }
};

inline constexpr Max max_op{};
inline constexpr Min min_op{};

} // namespace frechet
