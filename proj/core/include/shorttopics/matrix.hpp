#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace shorttopics {

/// Dense row-major matrix of doubles; one row per observation.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<double> row(std::size_t i) noexcept {
        assert(i < rows_);
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> row(std::size_t i) const noexcept {
        assert(i < rows_);
        return {data_.data() + i * cols_, cols_};
    }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    /// Copy of the selected rows, in the given order.
    Matrix gather(std::span<const std::size_t> indices) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class Metric { euclidean, cosine };

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> a) noexcept;
double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Euclidean distance, or 1 - cosine for Metric::cosine (1 when either vector is zero).
double distance(std::span<const double> a, std::span<const double> b, Metric metric) noexcept;

/// dot(u,v)/(|u||v|), or 0 when either norm is 0.
double cosine(std::span<const double> u, std::span<const double> v) noexcept;

/// Arithmetic mean of the given rows (sequential summation order).
std::vector<double> mean_of_rows(const Matrix& m);

} // namespace shorttopics
