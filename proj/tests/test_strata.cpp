#include <doctest.h>

#include <cmath>
#include <random>

#include "curvekit/strata.hpp"
#include "test_helpers.hpp"

using namespace curvekit;

namespace {

DeformationFamily model_family_G() {
    DeformationFamily f;
    f.components = {parse_expression("t^2 + t^3 + t^4"), parse_expression("s1*t + t^3 + t^4"),
                    parse_expression("s2*t + t^3 - t^4")};
    f.t_min = -0.5;
    f.t_max = 0.5;
    f.s_box = {{{-0.2, 0.2}, {-0.2, 0.2}}};
    f.label = "G";
    return f;
}

DeformationFamily normal_form_family(double a2, double a3, double a4, double b3, double b4,
                                     double c3, double c4) {
    auto t = expr_var(Var::T);
    auto poly = [&](double q2, double q3, double q4) {
        return expr_binary(
            BinaryOp::Add,
            expr_binary(BinaryOp::Mul, expr_const(q2), expr_pow(t, 2)),
            expr_binary(BinaryOp::Add,
                        expr_binary(BinaryOp::Mul, expr_const(q3), expr_pow(t, 3)),
                        expr_binary(BinaryOp::Mul, expr_const(q4), expr_pow(t, 4))));
    };
    auto lin = [&](Var s, double q3, double q4) {
        return expr_binary(BinaryOp::Add,
                           expr_binary(BinaryOp::Mul, expr_var(s), t), poly(0.0, q3, q4));
    };
    DeformationFamily f;
    f.components = {poly(a2, a3, a4), lin(Var::S1, b3, b4), lin(Var::S2, c3, c4)};
    f.t_min = -0.5;
    f.t_max = 0.5;
    f.s_box = {{{-0.15, 0.15}, {-0.15, 0.15}}};
    return f;
}

}  // namespace

TEST_CASE("stratum_values on the printed examples") {
    SpaceCurve flat = polynomial_curve({0, 1}, {0, 0, 1}, {0, 0, 0, 0, 1}, -1, 1);
    StratumValues sv = stratum_values(jet_coefficients(flat, 0.0, 4));
    CHECK(sv.F_value == doctest::Approx(0.0));
    CHECK(sv.C_residual.x == doctest::Approx(1.0));

    SpaceCurve cusp = polynomial_curve({0, 0, 1}, {0, 0, 0, 1}, {0}, -1, 1);
    StratumValues sc = stratum_values(jet_coefficients(cusp, 0.0, 4));
    CHECK(sc.C_residual.norm() == doctest::Approx(0.0));

    std::mt19937_64 rng(1);
    int nonzero = 0;
    for (int i = 0; i < 10; ++i) {
        testkit::Eq2 e = testkit::random_eq2(rng);
        SpaceCurve c = testkit::make_curve(e);
        StratumValues s = stratum_values(jet_coefficients(c, 0.0, 4));
        if (std::abs(s.F_value) > 1e-6) ++nonzero;
        // V linear part is 24(a2²+b2²+c2²)·F by construction of the printed ξ's
        JetCoefficients j = jet_coefficients(c, 0.0, 4);
        double q = j.a[1] * j.a[1] + j.b[1] * j.b[1] + j.c[1] * j.c[1];
        CHECK(testkit::rel_err(s.V_linear, 24.0 * q * s.F_value, 1e-10) < 1e-12);
        CHECK(testkit::rel_err(s.T_leading,
                               36.0 * s.T_quadric * s.T_quadric * s.T_dot12 * s.F_value,
                               1e-10) < 1e-12);
    }
    CHECK(nonzero >= 9);
}

TEST_CASE("stratum values are invariant under rigid motions") {
    std::mt19937_64 rng(2);
    testkit::Eq2 e = testkit::random_eq2(rng);
    SpaceCurve c = testkit::make_curve(e);
    StratumValues base = stratum_values(jet_coefficients(c, 0.1, 5));
    for (int i = 0; i < 20; ++i) {
        Mat3 R = testkit::random_rotation(rng);
        SpaceCurve m = rigidly_moved(c, R, {testkit::uni(rng, -1, 1), testkit::uni(rng, -1, 1),
                                            testkit::uni(rng, -1, 1)});
        StratumValues sv = stratum_values(jet_coefficients(m, 0.1, 5));
        CHECK(testkit::rel_err(sv.F_value, base.F_value, 1e-9) < 1e-8);
        CHECK(testkit::rel_err(sv.V_linear, base.V_linear, 1e-9) < 1e-8);
        CHECK(testkit::rel_err(sv.T_dot12, base.T_dot12, 1e-9) < 1e-8);
        CHECK(testkit::rel_err(sv.T_quadric, base.T_quadric, 1e-9) < 1e-8);
        CHECK(std::abs(sv.C_residual.norm() - base.C_residual.norm()) < 1e-10);
    }
}

TEST_CASE("cusp location and marked point of model family G") {
    DeformationFamily G = model_family_G();
    double t0 = cusp_parameter(G);
    CHECK(std::abs(t0) < 1e-10);
    // the normal-form family keeps the marked point at t = 0 for every s
    for (double s1 : {-0.1, 0.05}) {
        double ts = marked_point(G, {s1, 0.03}, t0, G.t_min, G.t_max);
        CHECK(std::abs(ts) < 1e-12);
    }
    DeformationFamily no_cusp = normal_form_family(1, 1, 1, 1, 1, 1, -1);
    no_cusp.components[0] = parse_expression("t + t^2");
    CHECK_THROWS_AS(cusp_parameter(no_cusp), NoCuspAtOrigin);
}

TEST_CASE("traced loci of model family G match the paper's table") {
    DeformationFamily G = model_family_G();
    TraceOptions opt;
    opt.grid = 128;

    StratumLocus F = trace_bifurcation(G, Stratum::F, G.s_box, opt);
    REQUIRE(F.has_tangent);
    double slopeF = F.tangent_direction.y / F.tangent_direction.x;
    CHECK(std::abs(slopeF - 1.0) < 1e-3);
    for (std::size_t i = 0; i < F.points.size(); ++i) CHECK(F.residuals[i] <= 1e-9);

    StratumLocus T = trace_bifurcation(G, Stratum::T, G.s_box, opt);
    REQUIRE(T.has_tangent);
    Vec2 want{5.0, 13.0};
    double cosang = std::abs(T.tangent_direction.normalized().dot(want.normalized()));
    CHECK(std::acos(std::min(1.0, cosang)) < 1e-3);

    StratumLocus V = trace_bifurcation(G, Stratum::V, G.s_box, opt);
    REQUIRE(V.has_tangent);
    double slopeV = V.tangent_direction.y / V.tangent_direction.x;
    CHECK(std::abs(slopeV - 1.0) < 1e-3);

    StratumLocus C = trace_bifurcation(G, Stratum::C, G.s_box, opt);
    REQUIRE(C.points.size() == 1);
    CHECK(C.points[0].norm() < 1e-7);

    // printed V implicit form evaluates to O(|s|^3) on the traced V points
    for (const Vec2& s : V.points) {
        double u = s.y - s.x;                       // b3 s2 - c3 s1 for G
        double expr = 24.0 * u + 48.0 * (s.x + s.y) * u;
        CHECK(std::abs(expr) <= 300.0 * std::pow(s.norm(), 3));
    }
}

TEST_CASE("parallel tracer matches the serial reference exactly") {
    DeformationFamily G = model_family_G();
    TraceOptions opt;
    opt.grid = 64;
    for (Stratum st : {Stratum::F, Stratum::T}) {
        StratumLocus a = trace_bifurcation(G, st, G.s_box, opt);
        StratumLocus b = trace_bifurcation_reference(G, st, G.s_box, opt);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].x == b.points[i].x);
            CHECK(a.points[i].y == b.points[i].y);
        }
    }
}

TEST_CASE("tangent_cone on synthetic loci") {
    StratumLocus line;
    line.stratum = Stratum::F;
    for (int i = -40; i <= 40; ++i) {
        if (i == 0) continue;
        double x = 0.002 * i;
        line.points.push_back({x, 2.0 * x});
    }
    TangentCone tc = tangent_cone(line);
    CHECK(std::abs(tc.direction.y / tc.direction.x - 2.0) < 1e-9);
    TangentCone same = tangent_cone(line, Vec2{1.0, 2.0}.normalized());
    CHECK(same.coincides_with_reference);
    CHECK(same.separation_exponent >= 90.0);

    StratumLocus cubic;
    cubic.stratum = Stratum::V;
    for (int i = -40; i <= 40; ++i) {
        if (i == 0) continue;
        double x = 0.002 * i;
        cubic.points.push_back({x, x - 4.0 * x * x * x});
    }
    TangentCone vc = tangent_cone(cubic, Vec2{1.0, 1.0}.normalized());
    CHECK(std::abs(vc.separation_exponent - 3.0) < 0.05);
    CHECK(std::abs(vc.cubic_coefficient + 4.0) < 1e-6);

    StratumLocus tiny;
    tiny.points = {{0.1, 0.1}};
    CHECK_THROWS_AS(tangent_cone(tiny), InsufficientPoints);
}

TEST_CASE("frs_genericity certificates") {
    DeformationFamily G = model_family_G();
    GenericityCertificates gc = frs_genericity(G);
    CHECK(gc.generic);
    CHECK(std::abs(gc.bc_det - 2.0) < 1e-12);
    CHECK(std::abs(gc.a2b3) > 0.5);
    CHECK(std::abs(gc.param_det) > 0.5);

    // b4c3 - b3c4 = 0: not FRS-generic
    DeformationFamily bad = normal_form_family(1, 1, 1, 1, 1, 1, 1);
    GenericityCertificates gb = frs_genericity(bad);
    CHECK(!gb.generic);
    CHECK(std::abs(gb.bc_det) < 1e-10);

    // missing second parameter direction: rank-1 parameter map (also bc_det = 0)
    DeformationFamily rank1;
    rank1.components = {parse_expression("t^2"), parse_expression("s1*t + t^3 + t^4"),
                        parse_expression("0*t")};
    rank1.t_min = -0.5;
    rank1.t_max = 0.5;
    rank1.s_box = {{{-0.1, 0.1}, {-0.1, 0.1}}};
    GenericityCertificates g1 = frs_genericity(rank1);
    CHECK(!g1.generic);
    CHECK(std::abs(g1.param_det) < 1e-8);

    // cubic part parallel to the cusp direction: not a space cusp at all
    // (γ''×γ''' = 0 on the slice), so cusp detection already rejects it
    DeformationFamily flatcubic;
    flatcubic.components = {parse_expression("t^2 + t^3"), parse_expression("s1*t"),
                            parse_expression("s2*t")};
    flatcubic.t_min = -0.5;
    flatcubic.t_max = 0.5;
    flatcubic.s_box = {{{-0.1, 0.1}, {-0.1, 0.1}}};
    CHECK_THROWS_AS(frs_genericity(flatcubic), NoCuspAtOrigin);

    DeformationFamily rank1b;
    rank1b.components = {parse_expression("t^2"), parse_expression("s1*t + s2*t + t^3 + t^4"),
                         parse_expression("t^3 - t^4")};
    rank1b.t_min = -0.5;
    rank1b.t_max = 0.5;
    rank1b.s_box = {{{-0.1, 0.1}, {-0.1, 0.1}}};
    GenericityCertificates gr = frs_genericity(rank1b);
    CHECK(!gr.generic);
    CHECK(std::abs(gr.param_det) < 1e-8);
}

TEST_CASE("T locus tangents match the printed numerator line on random generic families") {
    std::mt19937_64 rng(314);
    TraceOptions opt;
    opt.grid = 96;
    int done = 0;
    while (done < 10) {
        double a2 = testkit::uni(rng, 0.6, 1.5);
        double a3 = testkit::uni(rng, -1, 1);
        double a4 = testkit::uni(rng, -1, 1);
        double b3 = testkit::pick_away_from_zero(rng, -1.2, 1.2, 0.4);
        double b4 = testkit::uni(rng, -1, 1);
        double c3 = testkit::pick_away_from_zero(rng, -1.2, 1.2, 0.4);
        double c4 = testkit::uni(rng, -1, 1);
        double alpha = 4 * a2 * b4 - 9 * a3 * b3;  // multiplies s2
        double beta = 9 * a3 * c3 - 4 * a2 * c4;   // multiplies s1
        if (std::abs(b4 * c3 - b3 * c4) < 0.15) continue;
        if (std::hypot(alpha, beta) < 0.3) continue;
        DeformationFamily fam = normal_form_family(a2, a3, a4, b3, b4, c3, c4);
        StratumLocus T = trace_bifurcation(fam, Stratum::T, fam.s_box, opt);
        if (!T.has_tangent) continue;
        ++done;
        Vec2 want{alpha, -beta};  // alpha s2 + beta s1 = 0
        double cosang = std::abs(T.tangent_direction.normalized().dot(want.normalized()));
        CHECK(std::acos(std::min(1.0, cosang)) < 1e-3);

        if (done <= 3) {
            // traced F points obey the linear law s2 = (c3/b3) s1 + O(|s|²)
            StratumLocus F = trace_bifurcation(fam, Stratum::F, fam.s_box, opt);
            for (const Vec2& p : F.points) {
                double lin = std::abs(p.y - (c3 / b3) * p.x);
                CHECK(lin <= 50.0 * p.dot(p) + 1e-12);
            }
        }
    }
}

TEST_CASE("compare_to_model: G vs itself, and a random generic family") {
    TraceOptions opt;
    opt.grid = 96;
    DeformationFamily G = model_family_G();
    ModelComparison self = compare_to_model(G, opt);
    CHECK(self.strata_through_origin == 4);
    CHECK(self.matches_model);
    CHECK(self.cyclic_pattern == "FV,T,FV,T");

    DeformationFamily other = normal_form_family(1.0, 0.8, 0.5, 1.1, 0.4, 0.7, -0.9);
    // b4c3 - b3c4 = 0.4*0.7 + 1.1*0.9 = 1.27 > 0
    ModelComparison cmp = compare_to_model(other, opt);
    CHECK(cmp.strata_through_origin == 4);
    CHECK(cmp.fv_angle < 1e-3);
    CHECK(cmp.tf_angle > 0.05);
    CHECK(cmp.cyclic_pattern == self.cyclic_pattern);

    DeformationFamily bad = normal_form_family(1, 1, 1, 1, 1, 1, 1);
    CHECK_THROWS_AS(compare_to_model(bad, opt), Error);
}
