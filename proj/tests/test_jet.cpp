#include <doctest.h>

#include <random>

#include "curvekit/jet.hpp"
#include "test_helpers.hpp"

using namespace curvekit;

TEST_CASE("polynomial products and quotients") {
    // (1+t)(1-t) = 1 - t^2
    Jet a = Jet::variable(0.0, 3) + 1.0;
    Jet b = -Jet::variable(0.0, 3) + 1.0;
    Jet p = a * b;
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(-1.0));
    CHECK(p[3] == doctest::Approx(0.0));

    // 1/(1-t) = 1 + t + t^2 + t^3
    Jet g = Jet::constant(1.0, 3) / b;
    for (int j = 0; j <= 3; ++j) CHECK(g[j] == doctest::Approx(1.0));
}

TEST_CASE("elementary series") {
    Jet t = Jet::variable(0.0, 4);
    Jet e = exp(t);
    CHECK(e[0] == doctest::Approx(1.0));
    CHECK(e[1] == doctest::Approx(1.0));
    CHECK(e[2] == doctest::Approx(0.5));
    CHECK(e[3] == doctest::Approx(1.0 / 6));
    CHECK(e[4] == doctest::Approx(1.0 / 24));

    Jet s = sqrt(Jet::constant(1.0, 3));
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(0.0));
}

TEST_CASE("division against a finite-difference oracle: sin(t)/t at 0.3") {
    const double t0 = 0.3;
    Jet s = sin(Jet::variable(t0, 5));
    Jet q = s / Jet::variable(t0, 5);
    auto f = [](double t) { return std::sin(t) / t; };
    for (int m = 1; m <= 4; ++m) {
        double fd = testkit::fd_derivative(f, t0, m, 0.2);
        CHECK(testkit::rel_err(q.derivative(m), fd, 1e-6) < 1e-7);
    }
}

TEST_CASE("composite elementary function vs finite differences: sin(exp(t)-1)") {
    Jet t = Jet::variable(0.0, 6);
    Jet j = sin(exp(t) - 1.0);
    auto f = [](double x) { return std::sin(std::exp(x) - 1.0); };
    double maxc = 0.0;
    for (int m = 0; m <= 6; ++m) maxc = std::max(maxc, std::abs(j[m]));
    double fact = 1.0;
    for (int m = 1; m <= 6; ++m) {
        fact *= m;
        double fd_coeff = testkit::fd_derivative(f, 0.0, m) / fact;
        CHECK(std::abs(j[m] - fd_coeff) <= 1e-6 * maxc);
    }
}

TEST_CASE("compose: polynomial expansion and identity") {
    // outer = t^2, inner = t + t^2 -> t^2 + 2 t^3 (+ t^4 truncated at K=3)
    Jet outer = pow_int(Jet::variable(0.0, 3), 2);
    Jet inner = Jet::variable(0.0, 3) + pow_int(Jet::variable(0.0, 3), 2);
    Jet comp = compose(outer, inner);
    CHECK(comp[0] == doctest::Approx(0.0));
    CHECK(comp[1] == doctest::Approx(0.0));
    CHECK(comp[2] == doctest::Approx(1.0));
    CHECK(comp[3] == doctest::Approx(2.0));

    std::mt19937_64 rng(11);
    Jet arbitrary = sin(exp(Jet::variable(0.0, 5)) - 1.0) + 0.7;
    Jet id = Jet::variable(0.0, 5);
    id[0] = 0.0;
    Jet same = compose(arbitrary, id);
    for (int j = 0; j <= 5; ++j) CHECK(same[j] == doctest::Approx(arbitrary[j]));
}

TEST_CASE("compose: two routes to exp(sin t)") {
    Jet t = Jet::variable(0.0, 5);
    Jet direct = exp(sin(t));
    Jet outer = exp(Jet::variable(0.0, 5));  // exp about 0, sin t has zero constant term
    Jet via = compose(outer, sin(t));
    for (int j = 0; j <= 5; ++j) CHECK(testkit::rel_err(via[j], direct[j]) < 1e-12);
}

TEST_CASE("series inversion round-trips") {
    Jet t = Jet::variable(0.0, 8);
    Jet s = t + 0.4 * pow_int(t, 2) - 0.1 * pow_int(t, 3);
    Jet tinv = invert_series(s);
    Jet round = compose(s, tinv);
    CHECK(round[1] == doctest::Approx(1.0));
    for (int j = 2; j <= 8; ++j) CHECK(std::abs(round[j]) < 1e-12);
}

TEST_CASE("properties: commutativity and multiply-divide inverse") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        Jet a = Jet::constant(0.0, 6);
        Jet b = Jet::constant(0.0, 6);
        for (int j = 0; j <= 6; ++j) {
            a[j] = testkit::uni(rng, -2, 2);
            b[j] = testkit::uni(rng, -2, 2);
        }
        // the division recurrence amplifies (b_j/b_0)^K; keep the quotient well posed
        b[0] = testkit::pick_away_from_zero(rng, -2, 2, 1.0);
        Jet ab = a * b;
        Jet ba = b * a;
        for (int j = 0; j <= 6; ++j) CHECK(std::abs(ab[j] - ba[j]) < 1e-14 * (1 + std::abs(ab[j])));
        Jet back = ab / b;
        for (int j = 0; j <= 6; ++j) CHECK(testkit::rel_err(back[j], a[j], 1e-9) < 1e-12);
    }
}

TEST_CASE("random smooth expressions match Richardson finite differences") {
    std::mt19937_64 rng(7);
    int done = 0;
    while (done < 50) {
        ExprPtr e = testkit::random_expression(rng, 3);
        double t0 = testkit::uni(rng, -1, 1);
        Jet j = eval_jet(*e, t0, 8);
        auto f = [&](double x) { return eval_scalar(*e, x); };
        double scale = 0.0;
        for (int m = 1; m <= 6; ++m) scale = std::max(scale, std::abs(j.derivative(m)));
        if (scale < 1e-6) continue;  // constant-ish draw, nothing to compare
        // "relative" is measured against the derivative magnitude range of the
        // jet: individual high-order derivatives may be incidentally tiny
        for (int m = 1; m <= 6; ++m) {
            double fd = testkit::fd_derivative(f, t0, m);
            double diff = std::abs(fd - j.derivative(m));
            CHECK(diff <= 1e-5 * std::max({std::abs(fd), std::abs(j.derivative(m)), scale}) + 1e-8);
        }
        ++done;
    }
}

TEST_CASE("error paths") {
    Jet a = Jet::variable(0.0, 3);
    Jet b = Jet::variable(0.0, 4);
    CHECK_THROWS_AS(a + b, DegreeMismatch);
    CHECK_THROWS_AS(a * Jet::variable(0.5, 3), DegreeMismatch);

    Jet zero_const = Jet::variable(0.0, 3);  // constant term 0
    CHECK_THROWS_AS(a / zero_const, DivisionByZeroSeries);
    CHECK_THROWS_AS(sqrt(-1.0 + Jet::constant(0.0, 3)), DomainError);
    CHECK_THROWS_AS(pow_int(zero_const, -1), DomainError);

    Jet inner_bad = Jet::variable(0.0, 3) + 0.5;
    CHECK_THROWS_AS(compose(a, inner_bad), CompositionBasepointError);
}

TEST_CASE("pow_int negative exponents") {
    Jet t = Jet::variable(0.0, 4) + 2.0;
    Jet p = pow_int(t, -2);
    auto f = [](double x) { return 1.0 / ((x + 2.0) * (x + 2.0)); };
    for (int m = 0; m <= 4; ++m) {
        double fd = m == 0 ? f(0.0) : testkit::fd_derivative(f, 0.0, m, 0.2);
        CHECK(testkit::rel_err(p.derivative(m), fd, 1e-8) < 1e-7);
    }
}
