#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sfkit/ale.hpp"
#include "sfkit/curvature.hpp"
#include "sfkit/linalg.hpp"
#include "sfkit/rational.hpp"

namespace sfkit {

/// Neck parameters of the generalized connected sum: the resolution side is
/// cut at radius 1/a, a ball of radius b is removed on the orbifold side,
/// delta is the weight of the function spaces and lambda the slope of the
/// wide cut-offs beta_i.
struct GlueParams {
    double a, b;
    double delta = 0.5;
    double lambda = 0.1;

    void validate() const {
        if (!(a > 0) || !(b > 0)) throw std::domain_error("GlueParams: a, b must be positive");
        if (!(lambda > 0)) throw std::domain_error("GlueParams: lambda must be positive");
    }
};

namespace detail {
inline double bump(double s) { // supported on (1,2)
    if (s <= 1.0 || s >= 2.0) return 0.0;
    return std::exp(-1.0 / ((s - 1.0) * (2.0 - s)));
}
inline double bump_prime(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double w = (s - 1.0) * (2.0 - s);
    return bump(s) * (3.0 - 2.0 * s) / (w * w);
}
inline double bump_integral(double lo, double hi) {
    // composite Simpson; the integrand is smooth and flat at both ends
    const int n = 512; // panels (even count of subintervals = 2n)
    const double h = (hi - lo) / (2 * n);
    double s = bump(lo) + bump(hi);
    for (int i = 1; i < 2 * n; ++i) s += bump(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}
inline double bump_mass() {
    static const double z = bump_integral(1.0, 2.0);
    return z;
}
} // namespace detail

/// Smooth cut-off: 1 for t <= 1, 0 for t >= 2, strictly decreasing between,
/// built from the normalized integral of exp(-1/((t-1)(2-t))).
inline double cutoff_theta1(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - detail::bump_integral(1.0, t) / detail::bump_mass();
}

inline double cutoff_theta2(double t) { return 1.0 - cutoff_theta1(t); }

inline double cutoff_theta1_prime(double t) {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    return -detail::bump(t) / detail::bump_mass();
}

inline double cutoff_theta1_second(double t) {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    return -detail::bump_prime(t) / detail::bump_mass();
}

/// Complex modulus/argument pair.
struct PolarComplex {
    double modulus, argument;
};

/// The neck identification u = ab z, defined on the annulus
/// 1/a <= |z| <= 4/a, which lands on b <= |u| <= 4b. The argument is kept.
inline PolarComplex connected_sum_map(const GlueParams& p, const PolarComplex& z) {
    p.validate();
    if (z.modulus < 1.0 / p.a - 1e-12 || z.modulus > 4.0 / p.a + 1e-12)
        throw std::domain_error("connected_sum_map: |z| outside the identified annulus");
    return PolarComplex{p.a * p.b * z.modulus, z.argument};
}

enum class Side { resolution = 1, orbifold = 2 };

/// Wide and narrow cut-offs of the splicing construction:
///   beta_1 = theta1((a r/4)^lambda),      gamma_1 = theta1(a r/2),
///   beta_2 = theta2(2 (r/(2b))^lambda),   gamma_2 = theta2(r/(2b)).
/// betai * gammai = gammai holds pointwise because beta_i is exactly 1 on
/// the support of gamma_i.
inline std::pair<double, double> beta_gamma(const GlueParams& p, double radius, Side side) {
    p.validate();
    if (!(radius > 0)) throw std::domain_error("beta_gamma: radius must be positive");
    if (side == Side::resolution)
        return {cutoff_theta1(std::pow(p.a * radius / 4.0, p.lambda)),
                cutoff_theta1(p.a * radius / 2.0)};
    return {cutoff_theta2(2.0 * std::pow(radius / (2.0 * p.b), p.lambda)),
            cutoff_theta2(radius / (2.0 * p.b))};
}

struct GlueLocation {
    Side side;
    double radius; // |z| on the resolution side, |u| on the orbifold side
};

namespace detail {
inline double r1_profile(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 2.0) return s;
    return 1.0 + (s - 0.5) * (2.0 / 3.0); // linear bridge from 1 to 2
}
inline double r2_profile(double s) {
    if (s <= 0.5) return s;
    if (s >= 2.0) return 1.0;
    return 0.5 + (s - 0.5) / 3.0; // linear bridge from 1/2 to 1
}
} // namespace detail

/// Weight function of the glued function spaces: w = r1(z) on |z| <= 2/a and
/// w = (ab)^{-1} r2(u) on |u| >= 2b. The two expressions agree across the
/// seam since r1 and r2 differ there exactly by the factor ab, and
/// 1 <= w <= (ab)^{-1} globally.
inline double weight_w(const GlueParams& p, const GlueLocation& loc) {
    p.validate();
    if (!(loc.radius > 0)) throw std::domain_error("weight_w: radius must be positive");
    if (loc.side == Side::resolution) {
        if (loc.radius > 2.0 / p.a + 1e-12)
            throw std::domain_error("weight_w: |z| > 2/a is represented on the other chart");
        return detail::r1_profile(loc.radius);
    }
    if (loc.radius < 2.0 * p.b - 1e-12)
        throw std::domain_error("weight_w: |u| < 2b is represented on the other chart");
    return detail::r2_profile(loc.radius) / (p.a * p.b);
}

/// Deviation field eta_2 of the orbifold-side model metric, g_2 = |du|^2 +
/// eta_2(u); the default (absent) field means the flat local model.
using DeviationFn = std::function<Mat4(const Vec4&)>;

/// g_1^a on the resolution side: the ALE metric (normalized so the flat part
/// is the identity) with its deviation flattened by theta1(a|z|), so it is
/// untouched for |z| <= 1/a and exactly euclidean for |z| >= 2/a.
inline Mat4 glued_metric_side1(const GlueParams& p, const ALEData& d, const Vec4& w) {
    p.validate();
    const double R = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
    const double tq = 2.0 * static_cast<double>(d.q);
    const double theta = cutoff_theta1(p.a * R);
    if (theta == 0.0) return Mat4::identity();
    const Mat4 eta = metric_tilde_chart(d, w) * (1.0 / tq) - Mat4::identity();
    return Mat4::identity() + eta * theta;
}

/// g^{a,b} restricted to the orbifold chart {|u| >= 2b}: the rescaled
/// flattened model a^{-2} b^{-2} g_2^b with g_2^b = |du|^2 +
/// theta2(|u|/(2b)) eta_2(u).
inline Mat4 glued_metric_side2(const GlueParams& p, const Vec4& u,
                               const DeviationFn& eta2 = nullptr) {
    p.validate();
    const double r = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
    if (r < 2.0 * p.b - 1e-12)
        throw std::domain_error("glued_metric_side2: |u| < 2b is inside the excised ball");
    Mat4 g = Mat4::identity();
    if (eta2) {
        const double theta = (r >= 4.0 * p.b) ? 1.0 : cutoff_theta2(r / (2.0 * p.b));
        if (theta != 0.0) g = g + eta2(u) * theta;
    }
    return g * (1.0 / (p.a * p.a * p.b * p.b));
}

/// Glued metric at a location given by chart side and a 4-point in that
/// chart's coordinates.
inline Mat4 glued_metric(const GlueParams& p, const ALEData& d, Side side, const Vec4& point,
                         const DeviationFn& eta2 = nullptr) {
    if (side == Side::resolution) {
        const double R = std::sqrt(point[0] * point[0] + point[1] * point[1] +
                                   point[2] * point[2] + point[3] * point[3]);
        if (R > 2.0 / p.a + 1e-12)
            throw std::domain_error("glued_metric: |z| > 2/a is represented on the other chart");
        return glued_metric_side1(p, d, point);
    }
    return glued_metric_side2(p, point, eta2);
}

struct ScalingRow {
    double a;
    double max_curvature;
};

struct ScalingFit {
    double exponent = 0;
    double residual = 0;
    bool exact = false; // curvature identically zero across the sweep
    std::vector<ScalingRow> rows;
};

namespace detail {
/// Max |scalar curvature| of g_1^a over sample points of the transition
/// annulus 1/a <= |z| <= 2/a. The difference step scales with the radius.
inline double annulus_max_curvature(const GlueParams& p, const MetricFn& g1a, double h_scale) {
    double worst = 0;
    for (double f : {1.15, 1.35, 1.55, 1.75, 1.95})
        for (double theta : {M_PI / 4, M_PI / 3}) {
            const double R = f / p.a;
            const Vec4 w{R * std::cos(0.4) * std::cos(theta), R * std::sin(0.4) * std::cos(theta),
                         R * std::cos(1.1) * std::sin(theta), R * std::sin(1.1) * std::sin(theta)};
            worst = std::max(worst, std::abs(scalar_curvature_fd(g1a, w, h_scale * R)));
        }
    return worst;
}
} // namespace detail

/// Flatten the ALE metric at scale 1/a for each a in the sweep, measure the
/// worst scalar curvature over the transition annulus, and fit the decay
/// exponent of that maximum against a. An optional deviation override
/// replaces the ALE-derived eta_1 (eta ident. 0 reports "exact").
inline ScalingFit curvature_scaling_experiment(const ALEData& d, const std::vector<double>& a_list,
                                               const DeviationFn& eta1_override = nullptr,
                                               double h_scale = 1e-3) {
    if (a_list.size() < 2)
        throw std::domain_error("curvature_scaling_experiment: need at least 2 values of a");
    ScalingFit out;
    for (double a : a_list) {
        GlueParams p{a, a, 0.5, 0.1};
        MetricFn g1a;
        if (eta1_override) {
            g1a = [p, &eta1_override](const Vec4& w) {
                const double R = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
                return Mat4::identity() + eta1_override(w) * cutoff_theta1(p.a * R);
            };
        } else {
            g1a = [p, d](const Vec4& w) { return glued_metric_side1(p, d, w); };
        }
        out.rows.push_back({a, detail::annulus_max_curvature(p, g1a, h_scale)});
    }
    bool all_tiny = true;
    for (const auto& row : out.rows)
        if (row.max_curvature >= 1e-12) all_tiny = false;
    if (all_tiny) {
        out.exact = true;
        return out;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(out.rows.size());
    for (const auto& row : out.rows) {
        const double lx = std::log(row.a), ly = std::log(row.max_curvature);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - out.exponent * sx) / n;
    double ss = 0;
    for (const auto& row : out.rows) {
        const double r = std::log(row.max_curvature) - (out.exponent * std::log(row.a) + intercept);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / n);
    return out;
}

/// Error magnitude a^{ea} b^{eb} with exact rational exponents.
struct OrderTerm {
    Rational ea, eb;

    /// Exponent in b after substituting a = b^r.
    Rational b_exponent(const Rational& r) const { return ea * r + eb; }
};

/// Relation between the two neck scales, a = b^r.
struct Schedule {
    Rational a_as_power_of_b;

    static Schedule b_squared_equals_a() { return Schedule{Rational(2)}; }
    static Schedule a_equals_b() { return Schedule{Rational(1)}; }
};

struct BudgetResult {
    OrderTerm dominant;       // the larger of the two budget terms under the schedule
    Rational b_exponent;      // its size as a power of b
    bool degenerate = false;  // exponent <= 0: the budget does not shrink
};

/// The approximate-solution error budget O(a^{1-delta} + a^{-delta} b^2)
/// reduced along a schedule a = b^r: the dominant term is the one with the
/// smaller b-exponent. Under b^2 = a, delta = 1/2 both terms are O(b).
inline BudgetResult error_budget(const Rational& delta, const Schedule& schedule) {
    if (!(delta > 0 && delta < 1))
        throw std::domain_error("error_budget: delta must lie in (0,1)");
    const OrderTerm t1{Rational(1) - delta, Rational(0)};
    const OrderTerm t2{-delta, Rational(2)};
    const Rational e1 = t1.b_exponent(schedule.a_as_power_of_b);
    const Rational e2 = t2.b_exponent(schedule.a_as_power_of_b);
    BudgetResult out;
    if (e1 <= e2) {
        out.dominant = t1;
        out.b_exponent = e1;
    } else {
        out.dominant = t2;
        out.b_exponent = e2;
    }
    out.degenerate = (out.b_exponent <= 0);
    return out;
}

/// Sup over the transition region of the scale-invariant radial derivative
/// |(r d/dr)^k beta_1|, k = 1 or 2. In the variable s = (a r / 4)^lambda the
/// two orders are lambda s theta1'(s) and lambda^2 (s theta1'(s) +
/// s^2 theta1''(s)), so the bound is exactly proportional to lambda^k and
/// independent of a.
inline double cutoff_derivative_bounds(const GlueParams& p, int k) {
    p.validate();
    if (k != 1 && k != 2) throw std::domain_error("cutoff_derivative_bounds: k must be 1 or 2");
    double sup = 0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double s = 1.0 + static_cast<double>(i) / n; // support of theta1' is [1,2]
        const double v = (k == 1)
                             ? p.lambda * s * cutoff_theta1_prime(s)
                             : p.lambda * p.lambda *
                                   (s * cutoff_theta1_prime(s) + s * s * cutoff_theta1_second(s));
        sup = std::max(sup, std::abs(v));
    }
    return sup;
}

} // namespace sfkit
