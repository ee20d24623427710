#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace sfkit {

using Vec4 = std::array<double, 4>;

/// Dense 4x4 matrix, row-major. Just enough linear algebra for metric
/// tensors, frames and the curvature kernel.
struct Mat4 {
    std::array<std::array<double, 4>, 4> m{};

    static Mat4 zero() { return Mat4{}; }
    static Mat4 identity() {
        Mat4 a;
        for (int i = 0; i < 4; ++i) a.m[i][i] = 1.0;
        return a;
    }
    static Mat4 diag(double a, double b, double c, double d) {
        Mat4 r;
        r.m[0][0] = a; r.m[1][1] = b; r.m[2][2] = c; r.m[3][3] = d;
        return r;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Mat4 operator+(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat4 operator-(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
        return r;
    }
    Mat4 operator*(double s) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Mat4 transposed() const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    double max_abs() const {
        double s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s = std::max(s, std::abs(m[i][j]));
        return s;
    }

    double max_asymmetry() const {
        double s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s = std::max(s, std::abs(m[i][j] - m[j][i]));
        return s;
    }
};

inline Mat4 inverse(const Mat4& a) {
    // Gauss-Jordan with partial pivoting
    Mat4 w = a;
    Mat4 inv = Mat4::identity();
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(w.m[r][col]) > std::abs(w.m[piv][col])) piv = r;
        if (std::abs(w.m[piv][col]) < 1e-300)
            throw std::domain_error("Mat4::inverse: singular matrix");
        std::swap(w.m[piv], w.m[col]);
        std::swap(inv.m[piv], inv.m[col]);
        const double d = w.m[col][col];
        for (int j = 0; j < 4; ++j) { w.m[col][j] /= d; inv.m[col][j] /= d; }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = w.m[r][col];
            if (f == 0) continue;
            for (int j = 0; j < 4; ++j) {
                w.m[r][j] -= f * w.m[col][j];
                inv.m[r][j] -= f * inv.m[col][j];
            }
        }
    }
    return inv;
}

/// Cholesky-based positive definiteness test for a symmetric matrix.
inline bool is_positive_definite(const Mat4& a, double tol = 0.0) {
    std::array<std::array<double, 4>, 4> l{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a.m[i][j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= tol) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return true;
}

} // namespace sfkit
