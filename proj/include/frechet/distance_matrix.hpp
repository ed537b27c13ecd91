#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/curve.hpp"
#include "frechet/error.hpp"
#include "frechet/metric.hpp"

namespace frechet {

/// Row-major P x Q matrix of point-pair distances.
template <class T>
class DistanceMatrix {
public:
    using value_type = T;

    DistanceMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        if (rows == 0 || cols == 0) {
            throw Error("distance matrix must have at least one row and one column");
        }
        if (rows > std::numeric_limits<std::size_t>::max() / cols) {
            throw LimitError("distance matrix size overflows");
        }
        values_.resize(rows * cols);
    }

    /// From nested rows, e.g. `DistanceMatrix<double>{{0, 5}, {2, 1}}`.
    DistanceMatrix(std::initializer_list<std::initializer_list<T>> rows)
        : DistanceMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw DimensionError("ragged distance matrix");
            }
            std::copy(r.begin(), r.end(), values_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
            ++i;
        }
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] T& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    [[nodiscard]] const T& operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[i * cols_ + j];
    }

    [[nodiscard]] std::span<T> row(std::size_t i) noexcept {
        return std::span<T>(values_).subspan(i * cols_, cols_);
    }
    [[nodiscard]] std::span<const T> row(std::size_t i) const noexcept {
        return std::span<const T>(values_).subspan(i * cols_, cols_);
    }

    [[nodiscard]] std::span<const T> values() const noexcept { return values_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<T> values_;
};

template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] DistanceMatrix<T> distance_matrix(const Curve<T>& p, const Curve<T>& q, const M& m) {
    require_same_dim(p, q);
    DistanceMatrix<T> d(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            d(i, j) = static_cast<T>(m(p[i], q[j]));
        }
    }
    return d;
}

/// Single-consumer producer of distance-matrix rows in ascending order.
/// `next()` may only be called while `remaining() > 0`; the returned span is
/// valid until the following call.
template <class S>
concept RowSource = requires(S& s, const S& cs) {
    typename S::value_type;
    { s.next() } -> std::same_as<std::span<const typename S::value_type>>;
    { cs.remaining() } -> std::convertible_to<std::size_t>;
    { cs.rows() } -> std::convertible_to<std::size_t>;
    { cs.cols() } -> std::convertible_to<std::size_t>;
};

/// Rows of d_ij = m(p_i, q_j) computed on demand into one Q-sized buffer.
/// Holds the curves by reference; they must outlive the source.
template <std::floating_point T, PointMetric<T> M>
class LazyRows {
public:
    using value_type = T;

    LazyRows(const Curve<T>& p, const Curve<T>& q, M m) : p_(&p), q_(&q), m_(std::move(m)) {
        require_same_dim(p, q);
        buffer_.resize(q.size());
    }

    std::span<const T> next() {
        if (next_ >= p_->size()) {
            throw Error("row source exhausted");
        }
        const auto pi = (*p_)[next_];
        for (std::size_t j = 0; j < buffer_.size(); ++j) {
            buffer_[j] = static_cast<T>(m_(pi, (*q_)[j]));
        }
        ++next_;
        return buffer_;
    }

    [[nodiscard]] std::size_t remaining() const noexcept { return p_->size() - next_; }
    [[nodiscard]] std::size_t rows() const noexcept { return p_->size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return q_->size(); }

    /// Number of T slots this producer owns; always Q.
    [[nodiscard]] std::size_t workspace_size() const noexcept { return buffer_.size(); }

private:
    const Curve<T>* p_;
    const Curve<T>* q_;
    M m_;
    std::vector<T> buffer_;
    std::size_t next_ = 0;
};

template <std::floating_point T, PointMetric<T> M>
[[nodiscard]] LazyRows<T, M> row_source(const Curve<T>& p, const Curve<T>& q, const M& m) {
    return LazyRows<T, M>(p, q, m);
}

/// Row view over a materialized matrix (no copy; the matrix must outlive it).
template <class T>
class MatrixRows {
public:
    using value_type = T;

    explicit MatrixRows(const DistanceMatrix<T>& d) : d_(&d) {}

    std::span<const T> next() {
        if (next_ >= d_->rows()) {
            throw Error("row source exhausted");
        }
        return d_->row(next_++);
    }

    [[nodiscard]] std::size_t remaining() const noexcept { return d_->rows() - next_; }
    [[nodiscard]] std::size_t rows() const noexcept { return d_->rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return d_->cols(); }

private:
    const DistanceMatrix<T>* d_;
    std::size_t next_ = 0;
};

template <class T>
[[nodiscard]] MatrixRows<T> matrix_rows(const DistanceMatrix<T>& d) {
    return MatrixRows<T>(d);
}

} // namespace frechet
