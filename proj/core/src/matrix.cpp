#include "shorttopics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shorttopics {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Matrix Matrix::gather(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double cosine(std::span<const double> u, std::span<const double> v) noexcept {
    double uv = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) return 0.0;
    // sqrt of the product keeps cosine(v, v) at exactly 1; split when it over- or underflows.
    const double norms = std::isnormal(uu * vv) ? std::sqrt(uu * vv) : std::sqrt(uu) * std::sqrt(vv);
    const double c = uv / norms;
    return std::clamp(c, -1.0, 1.0);
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) noexcept {
    if (metric == Metric::cosine) return 1.0 - cosine(a, b);
    return euclidean_distance(a, b);
}

std::vector<double> mean_of_rows(const Matrix& m) {
    std::vector<double> out(m.cols(), 0.0);
    if (m.rows() == 0) return out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += r[j];
    }
    for (double& v : out) v /= static_cast<double>(m.rows());
    return out;
}

} // namespace shorttopics
