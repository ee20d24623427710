#include <catch2/catch_amalgamated.hpp>

#include "sfkit/ale.hpp"

using namespace sfkit;

namespace {
const ReducedFraction half(1, 2);
const ReducedFraction two_fifths(2, 5);

ALEData data12() { return ale_data(half, default_moments(half)); }
ALEData data25() { return ale_data(two_fifths, default_moments(two_fifths)); }
} // namespace

TEST_CASE("ale data layout") {
    const ALEData d = data12();
    CHECK(d.pairs == std::vector<std::pair<long long, long long>>{{0, -1}, {1, 0}, {2, 1}, {0, 1}});
    CHECK(d.diffs == std::vector<std::pair<long long, long long>>{{-1, -1}, {-1, -1}, {2, 0}});
    CHECK(d.moments == std::vector<double>{2.0, 1.0, 0.0});

    const ALEData d5 = data25();
    CHECK(d5.pairs ==
          std::vector<std::pair<long long, long long>>{{0, -1}, {1, 0}, {3, 1}, {5, 2}, {0, 1}});
    CHECK(d5.diffs.back() == std::pair<long long, long long>{5, 1}); // (q, p-1)
    CHECK(d.diffs.back() == std::pair<long long, long long>{2, 0});

    CHECK_THROWS_AS(ale_data(half, {1.0, 2.0}), std::domain_error);      // not decreasing
    CHECK_THROWS_AS(ale_data(half, {2.0, 0.0}), std::domain_error);      // not positive
    CHECK_THROWS_AS(ale_data(half, {1.0}), std::domain_error);           // arity: k+1 = 2
    CHECK_THROWS_AS(ale_data(two_fifths, {2.0, 1.0}), std::domain_error); // arity: k+1 = 3

    const ALEData burns = ale_data_burns({1.0});
    CHECK(burns.p == 0);
    CHECK(burns.q == 1);
    CHECK(burns.diffs == std::vector<std::pair<long long, long long>>{{-1, -1}, {1, -1}});
}

TEST_CASE("last difference is (q, p-1) for every small pair") {
    for (long long q = 2; q <= 30; ++q)
        for (long long p = 1; p < q; ++p) {
            if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
            const ReducedFraction f(p, q);
            const ALEData d = ale_data(f, default_moments(f));
            REQUIRE(d.diffs.back() == std::pair<long long, long long>{q, p - 1});
            REQUIRE(d.moments.size() == d.diffs.size()); // one ordinate per summand
        }
}

TEST_CASE("v fields: domain, summand parity, far field") {
    const ALEData d = data12();
    CHECK_THROWS_AS(v_fields(d, 0.0, 0.5), std::domain_error);

    // each summand is even (v1) / odd (v2) about its own ordinate
    for (std::size_t j = 0; j < d.diffs.size(); ++j)
        for (double s : {0.2, 0.7, 1.4}) {
            const auto up1 = detail::v1_term(d, j, 0.8, d.moments[j] + s);
            const auto dn1 = detail::v1_term(d, j, 0.8, d.moments[j] - s);
            CHECK(up1[0] == Catch::Approx(dn1[0]).margin(1e-15));
            CHECK(up1[1] == Catch::Approx(dn1[1]).margin(1e-15));
            const auto up2 = detail::v2_term(d, j, 0.8, d.moments[j] + s);
            const auto dn2 = detail::v2_term(d, j, 0.8, d.moments[j] - s);
            CHECK(up2[0] == Catch::Approx(-dn2[0]).margin(1e-15));
            CHECK(up2[1] == Catch::Approx(-dn2[1]).margin(1e-15));
        }

    // far field: v1 -> (sin 2theta / 2)(q, p-1), <v1,v2> -> (q/2) sin 2theta,
    // with corrections of order R^-2
    for (double R : {10.0, 20.0, 40.0}) {
        const double theta = M_PI / 4, s2 = std::sin(2 * theta);
        const double x = s2 / (R * R), y = std::cos(2 * theta) / (R * R);
        const VFields v = v_fields(d, x, y);
        const double e1 = std::hypot(v.v1[0] - 0.5 * s2 * d.q, v.v1[1] - 0.5 * s2 * (d.p - 1));
        CHECK(e1 <= 5.0 / (R * R));
        CHECK(std::abs(v.pairing - 0.5 * d.q * s2) <= 5.0 / (R * R));
    }
}

TEST_CASE("metric components: symmetry, t-independence, positivity") {
    const ALEData d = data25();
    const ChartPoint pt{0.8, 0.6, 0.25, 1.7};
    const Mat4 g = metric_at(d, pt);
    CHECK(g.max_asymmetry() == 0.0);
    CHECK(g(0, 0) == g(1, 1));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(0, 2) == 0.0);

    const Mat4 g2 = metric_at(d, ChartPoint{0.8, 0.6, 2.13, -0.4});
    CHECK((g - g2).max_abs() == 0.0);

    for (const ChartPoint& s : default_sample_points(d))
        REQUIRE(is_positive_definite(metric_at(d, s)));

    CHECK_THROWS_AS(metric_at(d, ChartPoint{-0.1, 0.0, 0, 0}), std::domain_error);
}

TEST_CASE("finite-difference curvature oracle on closed-form metrics") {
    const MetricFn euclid = [](const Vec4&) { return Mat4::identity(); };
    CHECK(std::abs(scalar_curvature_fd(euclid, {0.3, 0.4, 0.5, 0.6}, 1e-3)) <= 1e-10);

    const double r = 1.7; // round sphere of radius r times flat plane: s = 2/r^2
    const MetricFn sphere = [r](const Vec4& p) {
        Mat4 g = Mat4::identity();
        g(0, 0) = r * r;
        g(1, 1) = r * r * std::sin(p[0]) * std::sin(p[0]);
        return g;
    };
    CHECK(scalar_curvature_fd(sphere, {1.0, 0.3, 0.0, 0.0}, 1e-3) ==
          Catch::Approx(2.0 / (r * r)).margin(1e-4));
}

TEST_CASE("the ALE metric is scalar-flat at interior points") {
    for (const ReducedFraction& f :
         {ReducedFraction(1, 2), ReducedFraction(2, 3)}) {
        const ALEData d = ale_data(f, default_moments(f));
        const MetricFn g = metric_fn(d);
        const auto points = default_sample_points(d);
        REQUIRE(points.size() >= 20);
        for (const ChartPoint& pt : points) {
            const auto rich = scalar_curvature_richardson(g, {pt.x, pt.y, 0, 0}, 1e-3);
            REQUIRE(std::abs(rich.coarse) <= 1e-3);
            REQUIRE(std::abs(rich.fine) <= 1e-3);
        }
    }
}

TEST_CASE("complex structure: square, compatibility, alternate polar form") {
    const ALEData d = data25();
    for (const ChartPoint pt : {ChartPoint{0.8, 0.4, 0.3, 0.9}, ChartPoint{0.4, 2.4, 0, 0},
                                ChartPoint{1.5, -0.8, 1.0, 2.0}}) {
        const Mat4 g = metric_at(d, pt);
        const Mat4 J = complex_structure_at(d, pt);
        CHECK((J * J + Mat4::identity()).max_abs() <= 1e-12);
        CHECK((J.transposed() * g * J - g).max_abs() / g.max_abs() <= 1e-10);

        // polar rewriting of the defining formula:
        //   J dt = -v1/(sin th cos th) dlogR - v2/(sin th cos th) dtheta
        const VFields v = v_fields(d, pt.x, pt.y);
        const double r2 = pt.x * pt.x + pt.y * pt.y;
        const double sc = pt.x / (2 * std::sqrt(r2));
        for (int i = 0; i < 2; ++i) {
            const double a_alt =
                (-v.v1[i] * (-pt.x / (2 * r2)) - v.v2[i] * (pt.y / (2 * r2))) / sc;
            const double b_alt =
                (-v.v1[i] * (-pt.y / (2 * r2)) - v.v2[i] * (-pt.x / (2 * r2))) / sc;
            CHECK(J(2 + i, 0) == Catch::Approx(a_alt).epsilon(1e-12));
            CHECK(J(2 + i, 1) == Catch::Approx(b_alt).epsilon(1e-12));
        }
    }
}

TEST_CASE("kahler form: antisymmetry, J-invariance, closedness") {
    const ALEData d = data12();
    const ChartPoint pt{1.3, 0.5, 0.0, 0.0};
    const Mat4 w = kahler_form_at(d, pt);
    double anti = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) anti = std::max(anti, std::abs(w(i, j) + w(j, i)));
    CHECK(anti <= 1e-14 * w.max_abs());

    const Mat4 J = complex_structure_at(d, pt);
    CHECK((J.transposed() * w * J - w).max_abs() <= 1e-12 * w.max_abs());

    // d(omega) by central differences; components depend on (x, y) only, so
    // the only nontrivial components of the 3-form are (x, y, t_i)
    const double h = 1e-3;
    const Mat4 wxp = kahler_form_at(d, ChartPoint{pt.x + h, pt.y, 0, 0});
    const Mat4 wxm = kahler_form_at(d, ChartPoint{pt.x - h, pt.y, 0, 0});
    const Mat4 wyp = kahler_form_at(d, ChartPoint{pt.x, pt.y + h, 0, 0});
    const Mat4 wym = kahler_form_at(d, ChartPoint{pt.x, pt.y - h, 0, 0});
    for (int k = 2; k < 4; ++k) {
        const double dxw = (wxp(1, k) - wxm(1, k)) / (2 * h);
        const double dyw = (wyp(0, k) - wym(0, k)) / (2 * h);
        CHECK(std::abs(dxw - dyw) <= 1e-5);
    }
}

TEST_CASE("polar chart and its inverse") {
    const ALEData d = data25();
    const ChartPoint pt = polar_chart(d, 3.0, M_PI / 4, 0.6, 0.2);
    CHECK(pt.y == Catch::Approx(0.0).margin(1e-15));
    CHECK(pt.x == Catch::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(pt.t1 == Catch::Approx(5.0 * 0.2).epsilon(1e-14)); // t1 = q psi

    const PolarPoint back = chart_to_polar(d, pt);
    CHECK(back.R == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(back.theta == Catch::Approx(M_PI / 4).epsilon(1e-12));
    CHECK(back.phi == Catch::Approx(0.6).epsilon(1e-12));
    CHECK(back.psi == Catch::Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS(polar_chart(d, 2.0, 0.0, 0, 0), std::domain_error);
    CHECK_THROWS_AS(polar_chart(d, 2.0, M_PI / 2, 0, 0), std::domain_error);
}

TEST_CASE("far-field decay fits") {
    const auto rs = detail::log_spaced(10.0, 100.0, 12);

    const DecayFit polar12 = decay_fit(data12(), rs);
    CHECK_FALSE(polar12.exact);
    CHECK(polar12.slope <= -1.5);
    CHECK(polar12.residual < 0.1);

    const DecayFit coord25 = coordinate_decay_fit(data25(), rs);
    CHECK(coord25.slope <= -1.0);
    CHECK(coord25.residual < 0.1);

    // a metric identically equal to the flat model reports "exact"
    std::vector<std::pair<double, double>> flat_rows;
    for (double R : rs) flat_rows.emplace_back(R, 0.0);
    const DecayFit flat = decay_fit_samples(flat_rows);
    CHECK(flat.exact);
    CHECK(std::isinf(flat.slope));
}

TEST_CASE("components of dt + i J dt are closed") {
    const ALEData d = data12();
    const ChartPoint pt{0.8, 0.4, 0, 0};
    CHECK(closed_forms_residual(d, pt, 1e-3) <= 1e-5);

    // the residual is pure truncation error: O(h^2) refinement
    const double r1 = closed_forms_residual(d, pt, 2e-2);
    const double r2 = closed_forms_residual(d, pt, 1e-2);
    const double order = std::log2(r1 / r2);
    CHECK(order > 1.5);
    CHECK(order < 2.5);

    // in the deep far field the coefficients flatten out and the residual
    // drops to rounding level, the euclidean-model behaviour
    CHECK(closed_forms_residual(d, ChartPoint{5e3, 1.0, 0, 0}, 1e-2) <= 1e-12);
}
