#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/error.hpp"

namespace frechet {

/// A polygonal curve: P >= 1 points in R^D stored row-major.
///
/// Construction rejects empty curves, ragged coordinate buffers and
/// non-finite coordinates, so every kernel may assume P >= 1 and totally
/// ordered distances. Immutable after construction.
template <std::floating_point T>
class Curve {
public:
    using value_type = T;

    Curve(std::size_t dim, std::vector<T> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim_ == 0) {
            throw DimensionError("curve dimension must be at least 1");
        }
        if (coords_.empty()) {
            throw Error("curve must contain at least one point");
        }
        if (coords_.size() % dim_ != 0) {
            throw DimensionError("coordinate count " + std::to_string(coords_.size())
                                 + " is not a multiple of dimension " + std::to_string(dim_));
        }
        for (T c : coords_) {
            if (!std::isfinite(c)) {
                throw Error("curve coordinates must be finite");
            }
        }
    }

    /// `Curve<double>{{0, 0}, {3, 4}}`
    Curve(std::initializer_list<std::initializer_list<T>> points)
        : Curve(points.size() == 0 ? 0 : points.begin()->size(), flatten(points)) {}

    [[nodiscard]] std::size_t size() const noexcept { return coords_.size() / dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] std::span<const T> operator[](std::size_t i) const noexcept {
        return std::span<const T>(coords_).subspan(i * dim_, dim_);
    }

    [[nodiscard]] std::span<const T> front() const noexcept { return (*this)[0]; }
    [[nodiscard]] std::span<const T> back() const noexcept { return (*this)[size() - 1]; }

    /// Flat row-major coordinates, size() * dim() values.
    [[nodiscard]] std::span<const T> coords() const noexcept { return coords_; }

    friend bool operator==(const Curve&, const Curve&) = default;

private:
    static std::vector<T> flatten(std::initializer_list<std::initializer_list<T>> points) {
        std::vector<T> out;
        const std::size_t dim = points.size() == 0 ? 0 : points.begin()->size();
        for (const auto& p : points) {
            if (p.size() != dim) {
                throw DimensionError("all points of a curve must share one dimension");
            }
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    }

    std::size_t dim_;
    std::vector<T> coords_;
};

template <std::floating_point T>
void require_same_dim(const Curve<T>& p, const Curve<T>& q) {
    if (p.dim() != q.dim()) {
        throw DimensionError("curve dimensions differ: " + std::to_string(p.dim()) + " vs "
                             + std::to_string(q.dim()));
    }
}

} // namespace frechet
