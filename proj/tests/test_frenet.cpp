#include <doctest.h>

#include <random>

#include "curvekit/evolute.hpp"
#include "curvekit/frenet.hpp"
#include "test_helpers.hpp"

using namespace curvekit;

namespace {

SpaceCurve helix_curve() {
    return SpaceCurve{{parse_expression("cos(t)"), parse_expression("sin(t)"),
                       parse_expression("t")},
                      -6.0,
                      6.0,
                      "helix"};
}

}  // namespace

TEST_CASE("helix invariants: kappa = tau = 1/2") {
    SpaceCurve h = helix_curve();
    for (double t : {-2.0, -0.3, 0.0, 1.1, 4.0}) {
        FrenetData fd = frenet_apparatus(h, t);
        CHECK(fd.kappa_jet.value() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(fd.tau_jet.value() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(fd.speed.value() == doctest::Approx(std::sqrt(2.0)));
        // closed form cross-checked by finite differences of the invariant formulas
        auto kappa_of = [&](double tt) { return frenet_apparatus(h, tt).kappa_jet.value(); };
        CHECK(std::abs(testkit::fd_derivative(kappa_of, t, 1, 0.1)) < 1e-8);
    }
}

TEST_CASE("frame-normalized Taylor curves: kappa(0) = 2 b2, kappa'(0) = 6 b3") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20; ++i) {
        testkit::Eq2 e = testkit::random_eq2(rng);
        FrenetData fd = frenet_apparatus(testkit::make_curve(e), 0.0);
        CHECK(testkit::rel_err(fd.kappa_jet.value(), 2.0 * e.b2) < 1e-12);
        CHECK(std::abs(fd.kappa_jet.derivative(1) - 6.0 * e.b3) < 1e-10 * (1 + std::abs(e.b3)));
        // torsion at the basepoint measures 3 c3 / b2
        CHECK(testkit::rel_err(fd.tau_jet.value(), 3.0 * e.c3 / e.b2, 1e-9) < 1e-10);
    }
}

TEST_CASE("planar curve has vanishing torsion") {
    SpaceCurve planar = polynomial_curve({0, 1}, {0, 0, 1, 0.5}, {0}, -1, 1);
    for (double t : {-0.7, 0.0, 0.4}) {
        FrenetData fd = frenet_apparatus(planar, t);
        CHECK(std::abs(fd.tau_jet.value()) < 1e-13);
    }
}

TEST_CASE("frame orthonormality on random curves") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        testkit::Eq2 e = testkit::random_eq2(rng);
        SpaceCurve c = testkit::make_curve(e);
        for (int k = 0; k < 5; ++k) {
            double t = testkit::uni(rng, -0.6, 0.6);
            FrenetData fd;
            try {
                fd = frenet_apparatus(c, t);
            } catch (const Error&) {
                continue;  // sampled an inflection of the random instance
            }
            CHECK(std::abs(fd.T.norm() - 1.0) < 1e-10);
            CHECK(std::abs(fd.N.norm() - 1.0) < 1e-10);
            CHECK(std::abs(fd.B.norm() - 1.0) < 1e-10);
            CHECK(std::abs(fd.T.dot(fd.N)) < 1e-10);
            CHECK(std::abs(fd.T.dot(fd.B)) < 1e-10);
            CHECK(std::abs(fd.N.dot(fd.B)) < 1e-10);
            CHECK((fd.T.cross(fd.N) - fd.B).norm() < 1e-10);
        }
    }
}

TEST_CASE("kappa, tau, helix defect invariant under rigid motions") {
    std::mt19937_64 rng(3);
    testkit::Eq2 e = testkit::random_eq2(rng);
    SpaceCurve c = testkit::make_curve(e);
    for (int i = 0; i < 20; ++i) {
        Mat3 R = testkit::random_rotation(rng);
        Vec3 d{testkit::uni(rng, -2, 2), testkit::uni(rng, -2, 2), testkit::uni(rng, -2, 2)};
        SpaceCurve m = rigidly_moved(c, R, d);
        for (double t : {-0.4, 0.2, 0.5}) {
            FrenetData f0 = frenet_apparatus(c, t);
            FrenetData f1 = frenet_apparatus(m, t);
            CHECK(testkit::rel_err(f0.kappa_jet.value(), f1.kappa_jet.value()) < 1e-8);
            CHECK(testkit::rel_err(f0.tau_jet.value(), f1.tau_jet.value(), 1e-8) < 1e-8);
            HelixDefect h0 = helix_defect(c, t);
            HelixDefect h1 = helix_defect(m, t);
            CHECK(testkit::rel_err(h0.value, h1.value, 1e-7) < 1e-8);
        }
    }
}

TEST_CASE("kappa, tau invariant under orientation-preserving reparametrization") {
    std::mt19937_64 rng(8);
    testkit::Eq2 e = testkit::random_eq2(rng);
    SpaceCurve c = testkit::make_curve(e);
    SpaceCurve r = reparametrized(c, parse_expression("t + 0.3*t^2"), -0.6, 0.6);
    for (double u : {-0.5, -0.1, 0.3, 0.55}) {
        double t = u + 0.3 * u * u;
        FrenetData f0 = frenet_apparatus(c, t);
        FrenetData f1 = frenet_apparatus(r, u);
        CHECK(testkit::rel_err(f0.kappa_jet.value(), f1.kappa_jet.value()) < 1e-8);
        CHECK(testkit::rel_err(f0.tau_jet.value(), f1.tau_jet.value(), 1e-8) < 1e-8);
        // arc-length derivatives are parametrization-invariant as well
        CHECK(testkit::rel_err(f0.kappa_jet.derivative(1), f1.kappa_jet.derivative(1), 1e-7) <
              1e-7);
    }
}

TEST_CASE("regularity and inflection errors") {
    SpaceCurve line = polynomial_curve({0, 1}, {0, 2}, {0, -1}, -1, 1);
    CHECK_THROWS_AS(frenet_apparatus(line, 0.3), InflectionError);
    SpaceCurve cusp = polynomial_curve({0, 0, 1}, {0, 0, 0, 1}, {0}, -1, 1);
    CHECK_THROWS_AS(frenet_apparatus(cusp, 0.0), RegularityError);
    try {
        frenet_apparatus(cusp, 0.0);
    } catch (const RegularityError& err) {
        CHECK(err.magnitude == doctest::Approx(0.0));
    }
}

TEST_CASE("distance squared jets") {
    // circle of radius 1 about its center: constant 1/2
    SpaceCurve circle{{parse_expression("cos(t)"), parse_expression("sin(t)"),
                       parse_expression("0")},
                      -4.0, 4.0, "circle"};
    Jet d = distance_squared_jet(circle, 0.3, {0, 0, 0}, 8);
    CHECK(d.value() == doctest::Approx(0.5));
    for (int j = 1; j <= 8; ++j) CHECK(std::abs(d[j]) < 1e-12);

    SpaceCurve lx = polynomial_curve({0, 1}, {0}, {0}, -1, 1);
    Jet d2 = distance_squared_jet(lx, 0.0, {0, 0, 0}, 2);
    CHECK(d2[0] == doctest::Approx(0.0));
    CHECK(d2[1] == doctest::Approx(0.0));
    CHECK(d2[2] == doctest::Approx(0.5));
}

TEST_CASE("height jets and A_k classification") {
    SpaceCurve model = polynomial_curve({0, 1}, {0, 0, 1}, {0, 0, 0, 0, 1}, -1, 1);  // (t,t²,t⁴)
    Jet h = height_jet(model, 0.0, {0, 0, 1}, 6);
    AkClass cls = classify_Ak(h);
    CHECK(cls.kind == AkClass::Kind::Ak);
    CHECK(cls.k == 3);

    // H'''' (0) = kappa(0) tau'(0) at the flattening
    FrenetData fd = frenet_apparatus(model, 0.0);
    CHECK(testkit::rel_err(h.derivative(4), fd.kappa_jet.value() * fd.tau_jet.derivative(1)) <
          1e-10);

    CHECK_THROWS_AS(height_jet(model, 0.0, {0, 0, 2}, 6), NonUnitDirection);

    // direction orthogonal to the plane of a planar curve: constant height
    SpaceCurve planar = polynomial_curve({0, 1}, {0, 0, 1, 0.5}, {0}, -1, 1);
    Jet hp = height_jet(planar, 0.2, {0, 0, 1}, 6);
    for (int j = 1; j <= 6; ++j) CHECK(std::abs(hp[j]) < 1e-14);

    Jet t3 = pow_int(Jet::variable(0.0, 6), 3);
    CHECK(classify_Ak(t3).k == 2);
    Jet t4 = pow_int(Jet::variable(0.0, 6), 4);
    CHECK(classify_Ak(t4).k == 3);
    Jet reg = Jet::variable(0.0, 6) + pow_int(Jet::variable(0.0, 6), 3);
    CHECK(classify_Ak(reg).kind == AkClass::Kind::NonSingular);
    CHECK(classify_Ak(Jet::constant(1.0, 6)).kind == AkClass::Kind::DegenerateBeyondK);
}

TEST_CASE("A3 height singularity along B exactly when c3 = 0") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        testkit::Eq2 e = testkit::random_eq2(rng);
        bool flat = (i % 2 == 0);
        if (flat)
            e.c3 = 0.0;
        else
            e.c3 = testkit::pick_away_from_zero(rng, -2, 2, 0.3);
        e.c4 = testkit::pick_away_from_zero(rng, -2, 2, 0.3);
        SpaceCurve c = testkit::make_curve(e);
        FrenetData fd = frenet_apparatus(c, 0.0);
        Jet h = height_jet(c, 0.0, fd.B, 8);
        AkClass cls = classify_Ak(h);
        if (flat) {
            CHECK(cls.kind == AkClass::Kind::Ak);
            CHECK(cls.k == 3);
        } else {
            CHECK((cls.kind != AkClass::Kind::Ak || cls.k == 2));
        }
    }
}

TEST_CASE("versality of the model unfoldings") {
    for (int k : {2, 3, 4}) {
        Jet f = pow_int(Jet::variable(0.0, 8), k + 1);
        std::vector<Jet> speeds;
        for (int i = 1; i <= k - 1; ++i) speeds.push_back(pow_int(Jet::variable(0.0, 8), i));
        VersalityResult full = versality_test(f, k, speeds);
        CHECK(full.versal);
        CHECK(full.rank == k);
        for (std::size_t drop = 0; drop < speeds.size(); ++drop) {
            std::vector<Jet> fewer;
            for (std::size_t i = 0; i < speeds.size(); ++i)
                if (i != drop) fewer.push_back(speeds[i]);
            VersalityResult r = versality_test(f, k, fewer);
            CHECK(!r.versal);
            CHECK(r.rank == k - 1);
        }
    }

    Jet f = pow_int(Jet::variable(0.0, 6), 3);
    VersalityResult none = versality_test(f, 2, {});
    CHECK(!none.versal);
    CHECK(none.rank == 1);
    std::vector<Jet> sq{pow_int(Jet::variable(0.0, 6), 2)};
    VersalityResult s = versality_test(f, 2, sq);
    CHECK(!s.versal);
    CHECK(s.rank == 1);

    std::vector<Jet> bad{pow_int(Jet::variable(0.0, 4), 1)};
    CHECK_THROWS_AS(versality_test(f, 2, bad), InconsistentDegrees);
}

TEST_CASE("sphere contact orders") {
    std::mt19937_64 rng(13);
    testkit::Eq2 e = testkit::random_eq2(rng);
    e.c3 = 0.8;
    SpaceCurve c = testkit::make_curve(e);
    FocalData fd = focal_data(c, 0.1);
    int order = sphere_contact_order(c, 0.1, fd.center, fd.radius);
    CHECK(order == 3);
    // sphere through the point but not osculating
    Vec3 off = fd.center + Vec3{0.5, 0, 0};
    double r = (curve_point(c, 0.1) - off).norm();
    CHECK(sphere_contact_order(c, 0.1, off, r) <= 1);
    // sphere not through the point at all
    CHECK(sphere_contact_order(c, 0.1, fd.center, fd.radius * 2.0) == 0);
}

TEST_CASE("helix defect: zero on helices, nonzero generically, planar flagged") {
    SpaceCurve h = helix_curve();
    for (int i = 0; i < 20; ++i) {
        double t = -2.0 + 4.0 * i / 19.0;
        HelixDefect d = helix_defect(h, t);
        CHECK(!d.planar);
        CHECK(std::abs(d.value) < 1e-9);
    }
    SpaceCurve planar = polynomial_curve({0, 1}, {0, 0, 0, 1}, {0}, -1, 1);
    HelixDefect dp = helix_defect(planar, 0.4);
    CHECK(dp.planar);
    CHECK(dp.value == 0.0);

    std::mt19937_64 rng(17);
    testkit::Eq2 e = testkit::random_eq2(rng);
    e.c3 = 1.1;
    HelixDefect dg = helix_defect(testkit::make_curve(e), 0.05);
    CHECK(!dg.planar);
    CHECK(std::abs(dg.value) > 1e-6);
}
