#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "frechet/combinators.hpp"
#include "frechet/curve.hpp"
#include "frechet/error.hpp"

namespace frechet {

/// A point-pair distance usable by every kernel.
///
/// Required: `m(a, b)` returning a nonnegative T, symmetric, zero on equal
/// points, and `m.name()`. Optionally a metric may provide
/// `m.template eval_lanes<W>(pts, q, out)` evaluating W points stored
/// contiguously in `pts` against `q`; the batch kernels use it when present
/// and it must agree bit-for-bit with the scalar call.
template <class M, class T>
concept PointMetric = std::floating_point<T>
    && requires(const M& m, std::span<const T> a, std::span<const T> b) {
           { m(a, b) } -> std::convertible_to<T>;
           { m.name() } -> std::convertible_to<std::string_view>;
       };

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("point dimensions differ: " + std::to_string(a) + " vs "
                             + std::to_string(b));
    }
}

/// sqrt(dx^2 + dy^2) without intermediate overflow. Uses only IEEE-exact
/// operations (abs, select, div, sqrt) so the vectorized lane loop produces
/// the same bits as the scalar call.
template <std::floating_point T>
inline T hypot2(T dx, T dy) noexcept {
    const T ax = std::abs(dx);
    const T ay = std::abs(dy);
    const T hi = ax < ay ? ay : ax;
    const T lo = ax < ay ? ax : ay;
    const T safe = hi > T(0) ? hi : T(1);
    const T r = lo / safe;
    return hi * std::sqrt(T(1) + r * r);
}

/// Scaled square root of the sum of squares for arbitrary D.
/// For D = 2 this yields exactly hypot2 (the leading term is (hi/hi)^2 = 1).
template <std::floating_point T>
inline T hypot_n(std::span<const T> a, std::span<const T> b) noexcept {
    T hi = T(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const T d = std::abs(a[k] - b[k]);
        hi = hi < d ? d : hi;
    }
    const T safe = hi > T(0) ? hi : T(1);
    T sum = T(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const T r = (a[k] - b[k]) / safe;
        sum += r * r;
    }
    return hi * std::sqrt(sum);
}

} // namespace detail

/// Euclidean (l2) distance, evaluated as a robust hypotenuse.
struct Euclidean {
    [[nodiscard]] static constexpr std::string_view name() noexcept { return "euclidean"; }

    template <std::floating_point T>
    [[nodiscard]] T operator()(std::span<const T> a, std::span<const T> b) const {
        detail::require_same_size(a.size(), b.size());
        if (a.size() == 2) {
            return detail::hypot2(a[0] - b[0], a[1] - b[1]);
        }
        return detail::hypot_n(a, b);
    }

    template <std::size_t W, std::floating_point T>
    [[gnu::always_inline]] inline void eval_lanes(const T* __restrict pts, std::span<const T> q,
                                                  T* __restrict out) const {
        if (q.size() == 2) {
            const T qx = q[0];
            const T qy = q[1];
            #pragma GCC unroll 1
            for (std::size_t k = 0; k < W; ++k) {
                out[k] = detail::hypot2(pts[2 * k] - qx, pts[2 * k + 1] - qy);
            }
        } else {
            const std::size_t dim = q.size();
            for (std::size_t k = 0; k < W; ++k) {
                out[k] = detail::hypot_n(std::span<const T>(pts + k * dim, dim), q);
            }
        }
    }
};

/// Squared Euclidean distance. Not a metric (no triangle inequality).
struct SquaredEuclidean {
    [[nodiscard]] static constexpr std::string_view name() noexcept { return "sq-euclidean"; }

    template <std::floating_point T>
    [[nodiscard]] T operator()(std::span<const T> a, std::span<const T> b) const {
        detail::require_same_size(a.size(), b.size());
        T sum = T(0);
        for (std::size_t k = 0; k < a.size(); ++k) {
            const T d = a[k] - b[k];
            sum += d * d;
        }
        return sum;
    }
};

/// Great-circle distance in meters between (lat, lon) points given in degrees,
/// on a sphere of radius 6 371 000 m. Evaluated in double precision.
struct Haversine {
    static constexpr double earth_radius_m = 6'371'000.0;

    [[nodiscard]] static constexpr std::string_view name() noexcept { return "haversine"; }

    template <std::floating_point T>
    [[nodiscard]] T operator()(std::span<const T> a, std::span<const T> b) const {
        detail::require_same_size(a.size(), b.size());
        if (a.size() != 2) {
            throw DimensionError("haversine requires 2-D (lat, lon) points");
        }
        check_range(a);
        check_range(b);
        constexpr double to_rad = std::numbers::pi / 180.0;
        const double lat1 = static_cast<double>(a[0]) * to_rad;
        const double lat2 = static_cast<double>(b[0]) * to_rad;
        const double half_dlat =
            (static_cast<double>(b[0]) - static_cast<double>(a[0])) * to_rad / 2.0;
        const double half_dlon =
            (static_cast<double>(b[1]) - static_cast<double>(a[1])) * to_rad / 2.0;
        const double s_lat = std::sin(half_dlat);
        const double s_lon = std::sin(half_dlon);
        double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * (s_lon * s_lon);
        h = h < 0.0 ? 0.0 : (h > 1.0 ? 1.0 : h);
        const double c = 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
        return static_cast<T>(earth_radius_m * c);
    }

private:
    template <std::floating_point T>
    static void check_range(std::span<const T> p) {
        if (!(p[0] >= T(-90) && p[0] <= T(90)) || !(p[1] >= T(-180) && p[1] <= T(180))) {
            throw Error("haversine coordinates out of range: latitude must lie in [-90, 90] "
                        "and longitude in [-180, 180] degrees");
        }
    }
};

/// Adapts a user callable `T f(span<const T>, span<const T>)` into a named metric.
template <class F>
class CustomMetric {
public:
    CustomMetric(std::string name, F f) : name_(std::move(name)), f_(std::move(f)) {}

    [[nodiscard]] std::string_view name() const noexcept { return name_; }

    template <std::floating_point T>
        requires std::regular_invocable<const F&, std::span<const T>, std::span<const T>>
    [[nodiscard]] T operator()(std::span<const T> a, std::span<const T> b) const {
        detail::require_same_size(a.size(), b.size());
        return static_cast<T>(f_(a, b));
    }

private:
    std::string name_;
    F f_;
};

/// Largest distance between adjacent points of `p`; 0 for a single point.
template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] T sample_width(const Curve<T>& p, const M& m) {
    T width = T(0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        width = max_op(width, static_cast<T>(m(p[i - 1], p[i])));
    }
    return width;
}

} // namespace frechet
