#include <catch2/catch_amalgamated.hpp>

#include "sfkit/glue.hpp"

using namespace sfkit;

namespace {
GlueParams params_for(double a) { return GlueParams{a, std::sqrt(a), 0.5, 0.1}; }

ALEData data12() {
    return ale_data(ReducedFraction(1, 2), default_moments(ReducedFraction(1, 2)));
}
} // namespace

TEST_CASE("cutoff plateaus, monotonicity and complement") {
    CHECK(cutoff_theta1(0.5) == 1.0);
    CHECK(cutoff_theta1(1.0) == 1.0);
    CHECK(cutoff_theta1(2.0) == 0.0);
    CHECK(cutoff_theta1(3.0) == 0.0);
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
        const double v = cutoff_theta1(t);
        CHECK(v <= prev + 1e-12); // quadrature wobble at rounding level
        prev = v;
    }
    for (double t : {0.2, 0.9, 1.3, 1.77, 2.4})
        CHECK(cutoff_theta1(t) + cutoff_theta2(t) == 1.0);
    CHECK(cutoff_theta1_prime(1.5) < 0);
    CHECK(cutoff_theta1_prime(0.9) == 0.0);
}

TEST_CASE("connected sum map scales the annulus and keeps the argument") {
    const GlueParams p = params_for(0.05);
    const PolarComplex inner = connected_sum_map(p, {1.0 / p.a, 0.7});
    CHECK(inner.modulus == Catch::Approx(p.b).epsilon(1e-14));
    CHECK(inner.argument == 0.7);
    const PolarComplex outer = connected_sum_map(p, {4.0 / p.a, -0.2});
    CHECK(outer.modulus == Catch::Approx(4.0 * p.b).epsilon(1e-14));
    CHECK_THROWS_AS(connected_sum_map(p, {0.5 / p.a, 0.0}), std::domain_error);
    CHECK_THROWS_AS(connected_sum_map(p, {5.0 / p.a, 0.0}), std::domain_error);
}

TEST_CASE("beta and gamma cutoffs: values and idempotence") {
    const GlueParams p = params_for(0.05);

    const auto [b_in, g_in] = beta_gamma(p, 1.0 / p.a, Side::resolution);
    CHECK(b_in == 1.0);
    CHECK(g_in == 1.0);
    CHECK(beta_gamma(p, 4.0 / p.a, Side::resolution).second == 0.0);

    // beta_i gamma_i = gamma_i and gamma_1 + gamma_2 = 1 across the neck
    double worst_idem = 0, worst_sum = 0;
    for (int i = 1; i <= 1000; ++i) {
        const double r = (0.01 * i) * (10.0 / p.a) / 10.0;
        const auto [b1, g1] = beta_gamma(p, r, Side::resolution);
        worst_idem = std::max(worst_idem, std::abs(b1 * g1 - g1));
        const double u = p.a * p.b * r;
        const auto [b2, g2] = beta_gamma(p, u, Side::orbifold);
        worst_idem = std::max(worst_idem, std::abs(b2 * g2 - g2));
        worst_sum = std::max(worst_sum, std::abs(g1 + g2 - 1.0));
    }
    CHECK(worst_idem <= 1e-14);
    CHECK(worst_sum <= 1e-14);
}

TEST_CASE("weight function: plateaus, seam agreement, bounds") {
    const GlueParams p = params_for(0.05);
    CHECK(weight_w(p, {Side::resolution, 0.4}) == 1.0);

    const double wz = weight_w(p, {Side::resolution, 2.0 / p.a});
    const double wu = weight_w(p, {Side::orbifold, p.a * p.b * (2.0 / p.a)});
    CHECK(wz == Catch::Approx(wu).epsilon(1e-12));

    const double cap = 1.0 / (p.a * p.b);
    CHECK(weight_w(p, {Side::orbifold, 3.0}) == Catch::Approx(cap).epsilon(1e-14));
    for (int i = 1; i <= 400; ++i) {
        const double r = 0.005 * i * (2.0 / p.a);
        if (r <= 2.0 / p.a) {
            const double w = weight_w(p, {Side::resolution, r});
            CHECK(w >= 1.0);
            CHECK(w <= cap * (1 + 1e-14));
        }
        const double u = std::max(2.0 * p.b, p.a * p.b * r);
        const double w2 = weight_w(p, {Side::orbifold, u});
        CHECK(w2 >= 1.0);
        CHECK(w2 <= cap * (1 + 1e-14));
    }
    CHECK_THROWS_AS(weight_w(p, {Side::orbifold, 0.1 * p.b}), std::domain_error);
}

TEST_CASE("glued metric: untouched inside, flat across the seam, matched scaling") {
    const ALEData d = data12();
    const GlueParams p = params_for(1.0 / 20);

    const Vec4 win{3.0, 2.0, 4.0, 1.0}; // |w| well below 1/a
    const Mat4 inner = glued_metric(p, d, Side::resolution, win);
    const Mat4 ale = metric_tilde_chart(d, win) * (1.0 / (2.0 * d.q));
    CHECK((inner - ale).max_abs() == 0.0);

    const double R = 2.0 / p.a;
    const Vec4 seam{R * 0.5, R * 0.5, R * 0.5, R * 0.5};
    CHECK((glued_metric(p, d, Side::resolution, seam) - Mat4::identity()).max_abs() == 0.0);

    // matching condition: components pull back across u = ab z with (ab)^2
    const double s = p.a * p.b;
    const Vec4 useam{s * seam[0], s * seam[1], s * seam[2], s * seam[3]};
    const Mat4 orb = glued_metric(p, d, Side::orbifold, useam);
    CHECK((orb * (s * s) - glued_metric(p, d, Side::resolution, seam)).max_abs() <= 1e-14);

    CHECK_THROWS_AS(glued_metric(p, d, Side::orbifold, Vec4{1e-9, 0, 0, 0}), std::domain_error);
}

TEST_CASE("error budget exponent arithmetic") {
    const BudgetResult pinned = error_budget(Rational(1, 2), Schedule::b_squared_equals_a());
    CHECK(pinned.b_exponent == 1); // O(b), exactly
    CHECK_FALSE(pinned.degenerate);

    // a = b: the larger term is a^{1-delta} = b^{1/2}
    const BudgetResult eq = error_budget(Rational(1, 2), Schedule::a_equals_b());
    CHECK(eq.b_exponent == Rational(1, 2));
    CHECK(eq.dominant.ea == Rational(1, 2));
    CHECK(eq.dominant.eb == 0);

    // delta -> 1 degenerates the budget towards O(1): exponent 2 - 2 delta -> 0
    const BudgetResult degen = error_budget(Rational(999, 1000), Schedule::b_squared_equals_a());
    CHECK(degen.b_exponent == Rational(2, 1000));
    CHECK_FALSE(degen.degenerate); // still positive for delta < 1; delta = 1 is a regime error
    CHECK_THROWS_AS(error_budget(Rational(1), Schedule::b_squared_equals_a()), std::domain_error);
    CHECK_THROWS_AS(error_budget(Rational(0), Schedule::b_squared_equals_a()), std::domain_error);

    // a schedule that lets the second term grow flags the budget as broken
    const BudgetResult broken = error_budget(Rational(3, 4), Schedule{Rational(4)});
    CHECK(broken.b_exponent == Rational(-1)); // a^{-delta} b^2 = b^{-3+2}
    CHECK(broken.degenerate);

    // under b^2 = a the dominant exponent 2 - 2 delta is monotone in delta
    Rational prev(2);
    for (int n = 1; n < 10; ++n) {
        const BudgetResult r = error_budget(Rational(n, 10), Schedule::b_squared_equals_a());
        CHECK(r.b_exponent < prev);
        prev = r.b_exponent;
        if (n == 5) CHECK(r.b_exponent == 1);
    }
}

TEST_CASE("cutoff derivative bounds scale exactly like lambda^k") {
    const GlueParams p1{0.05, 0.1, 0.5, 0.1};
    const GlueParams p2{0.05, 0.1, 0.5, 0.05};
    const double b11 = cutoff_derivative_bounds(p1, 1);
    const double b21 = cutoff_derivative_bounds(p2, 1);
    CHECK(b11 / b21 == Catch::Approx(2.0).epsilon(1e-12));
    const double b12 = cutoff_derivative_bounds(p1, 2);
    const double b22 = cutoff_derivative_bounds(p2, 2);
    CHECK(b12 / b22 == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(b11 > 0);
    CHECK_THROWS_AS(cutoff_derivative_bounds(p1, 3), std::domain_error);

    // independence of a: the bound is a function of lambda alone
    const GlueParams p3{0.001, 0.1, 0.5, 0.1};
    CHECK(cutoff_derivative_bounds(p3, 1) == Catch::Approx(b11).epsilon(1e-14));
}

TEST_CASE("curvature scaling experiment") {
    const ALEData d = data12();

    // flat deviation: the experiment reports exact zero curvature
    const ScalingFit flat = curvature_scaling_experiment(
        d, {1.0 / 20, 1.0 / 40}, [](const Vec4&) { return Mat4::zero(); });
    CHECK(flat.exact);

    // a synthetic deviation with the 1/R profile assumed by the flattening
    // estimate reproduces the cubic rate
    const DeviationFn one_over_r = [](const Vec4& w) {
        const double R = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
        Mat4 e = Mat4::zero();
        e(0, 0) = 1.0 / R;
        e(1, 1) = -0.5 / R;
        e(0, 1) = e(1, 0) = 0.3 / R;
        e(2, 2) = 0.2 / R;
        return e;
    };
    const ScalingFit cubic =
        curvature_scaling_experiment(d, {1.0 / 20, 1.0 / 40, 1.0 / 80}, one_over_r);
    CHECK(cubic.exponent == Catch::Approx(3.0).margin(0.5));

    // the ALE-chart deviation decays one order faster (R^-2), so the measured
    // exponent sits near 4; the Richardson-stable fit is what the acceptance
    // suite checks against its stated window
    const ScalingFit ale = curvature_scaling_experiment(d, {1.0 / 20, 1.0 / 40, 1.0 / 80});
    CHECK(ale.exponent > 2.5);
    CHECK(ale.exponent == Catch::Approx(4.0).margin(0.25));
    CHECK(ale.residual < 0.05);

    // the fitted exponent is stable under halving the difference step
    const ScalingFit fine =
        curvature_scaling_experiment(d, {1.0 / 20, 1.0 / 40, 1.0 / 80}, nullptr, 5e-4);
    CHECK(fine.exponent == Catch::Approx(ale.exponent).margin(0.05));

    CHECK_THROWS_AS(curvature_scaling_experiment(d, {0.05}), std::domain_error);
}
