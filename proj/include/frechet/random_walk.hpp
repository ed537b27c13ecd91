#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "frechet/curve.hpp"

namespace frechet {

/// SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter passed through a
/// fixed mixing function. Output depends only on the seed, on every platform.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform over {-1, 0, +1}; rejects the single value that would bias x % 3.
    constexpr int step() noexcept {
        constexpr std::uint64_t limit = max() - max() % 3;
        std::uint64_t x = (*this)();
        while (x >= limit) {
            x = (*this)();
        }
        return static_cast<int>(x % 3) - 1;
    }

private:
    std::uint64_t state_;
};

struct WalkSpec {
    std::size_t n_points = 1;
    std::uint64_t seed = 0;
};

/// 2-D lattice walk from the origin; each step draws dx then dy from {-1, 0, +1}.
template <std::floating_point T = double>
[[nodiscard]] Curve<T> gen_random_walk(const WalkSpec& spec) {
    if (spec.n_points == 0) {
        throw Error("random walk needs at least one point");
    }
    SplitMix64 rng(spec.seed);
    std::vector<T> coords;
    coords.reserve(2 * spec.n_points);
    long long x = 0;
    long long y = 0;
    coords.push_back(T(0));
    coords.push_back(T(0));
    for (std::size_t k = 1; k < spec.n_points; ++k) {
        x += rng.step();
        y += rng.step();
        coords.push_back(static_cast<T>(x));
        coords.push_back(static_cast<T>(y));
    }
    return Curve<T>(2, std::move(coords));
}

/// Seed of the k-th walk derived from a master seed: the k-th SplitMix64 output.
[[nodiscard]] inline std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count) {
    SplitMix64 rng(master);
    std::vector<std::uint64_t> seeds(count);
    for (auto& s : seeds) {
        s = rng();
    }
    return seeds;
}

/// `n_curves` walks of `n_points` points each, seeded from `seed`.
template <std::floating_point T = double>
[[nodiscard]] std::vector<Curve<T>> gen_random_walks(std::size_t n_curves, std::size_t n_points,
                                                     std::uint64_t seed) {
    std::vector<Curve<T>> walks;
    walks.reserve(n_curves);
    for (std::uint64_t s : derive_seeds(seed, n_curves)) {
        walks.push_back(gen_random_walk<T>({n_points, s}));
    }
    return walks;
}

} // namespace frechet
