#pragma once

#include <array>
#include <functional>

#include "sfkit/linalg.hpp"

namespace sfkit {

/// Metric tensor field: coordinates -> symmetric 4x4 components.
using MetricFn = std::function<Mat4(const Vec4&)>;

namespace fd {

/// Central-difference partial derivatives of the metric at p, one Mat4 per
/// coordinate direction.
inline std::array<Mat4, 4> metric_derivatives(const MetricFn& g, const Vec4& p, double h) {
    std::array<Mat4, 4> d;
    for (int k = 0; k < 4; ++k) {
        Vec4 pp = p, pm = p;
        pp[k] += h;
        pm[k] -= h;
        d[k] = (g(pp) - g(pm)) * (0.5 / h);
    }
    return d;
}

using Christoffel = std::array<std::array<std::array<double, 4>, 4>, 4>; // [a][b][c]

inline Christoffel christoffel(const MetricFn& g, const Vec4& p, double h) {
    const Mat4 g0 = g(p);
    const Mat4 ginv = inverse(g0);
    const auto dg = metric_derivatives(g, p, h);
    Christoffel gamma{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = b; c < 4; ++c) {
                double s = 0;
                for (int d = 0; d < 4; ++d)
                    s += ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                gamma[a][b][c] = 0.5 * s;
                gamma[a][c][b] = gamma[a][b][c];
            }
    return gamma;
}

} // namespace fd

/// Scalar curvature by second-order central differences: Christoffel symbols
/// on a +-h stencil, curvature assembled from their differences. Truncation
/// error O(h^2); the metric must be smooth in a 2h-ball around p.
inline double scalar_curvature_fd(const MetricFn& g, const Vec4& p, double h) {
    const auto gamma0 = fd::christoffel(g, p, h);
    std::array<fd::Christoffel, 4> dgamma; // dgamma[m] = d/dx^m Gamma
    for (int m = 0; m < 4; ++m) {
        Vec4 pp = p, pm = p;
        pp[m] += h;
        pm[m] -= h;
        const auto gp = fd::christoffel(g, pp, h);
        const auto gm = fd::christoffel(g, pm, h);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    dgamma[m][a][b][c] = (gp[a][b][c] - gm[a][b][c]) / (2 * h);
    }

    // Ric_{bd} = d_a Gamma^a_{db} - d_d Gamma^a_{ab}
    //          + Gamma^a_{ae} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{ab}
    Mat4 ric = Mat4::zero();
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
            double s = 0;
            for (int a = 0; a < 4; ++a) {
                s += dgamma[a][a][d][b] - dgamma[d][a][a][b];
                for (int e = 0; e < 4; ++e)
                    s += gamma0[a][a][e] * gamma0[e][d][b] - gamma0[a][d][e] * gamma0[e][a][b];
            }
            ric(b, d) = s;
        }

    const Mat4 ginv = inverse(g(p));
    double scal = 0;
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) scal += ginv(b, d) * ric(b, d);
    return scal;
}

/// Same quantity at h and h/2 for a Richardson consistency check.
struct RichardsonPair {
    double coarse, fine;
    double discrepancy() const { return coarse - fine; }
};

inline RichardsonPair scalar_curvature_richardson(const MetricFn& g, const Vec4& p, double h) {
    return {scalar_curvature_fd(g, p, h), scalar_curvature_fd(g, p, h / 2)};
}

} // namespace sfkit
