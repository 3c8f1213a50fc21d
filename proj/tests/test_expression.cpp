#include <doctest.h>

#include <random>

#include "curvekit/curve.hpp"
#include "test_helpers.hpp"

using namespace curvekit;

TEST_CASE("parser basics") {
    ExprPtr e = parse_expression("t^2 + t^3 + t^4");
    CHECK(eval_scalar(*e, 1.0) == doctest::Approx(3.0));
    CHECK(eval_scalar(*e, 2.0) == doctest::Approx(4 + 8 + 16));

    ExprPtr p = parse_expression("s1*t + t^3 - t^4");
    CHECK(eval_scalar(*p, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(eval_scalar(*p, 1.0, 2.5, 0.0) == doctest::Approx(2.5));

    ExprPtr a = parse_expression("2*t + 3");
    ExprPtr b = parse_expression("2 * (t) + 3");
    CHECK(pretty_print(a) == pretty_print(b));
}

TEST_CASE("precedence and functions") {
    CHECK(eval_scalar(*parse_expression("2*t^2"), 3.0) == doctest::Approx(18.0));
    CHECK(eval_scalar(*parse_expression("-t^2"), 2.0) == doctest::Approx(-4.0));
    CHECK(eval_scalar(*parse_expression("(1+t)/(1-t)"), 0.5) == doctest::Approx(3.0));
    CHECK(eval_scalar(*parse_expression("sin(t)^2 + cos(t)^2"), 0.7) == doctest::Approx(1.0));
    CHECK(eval_scalar(*parse_expression("sqrt(1 + t^2)"), 2.0) == doctest::Approx(std::sqrt(5.0)));
    CHECK(eval_scalar(*parse_expression("exp(-t)"), 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(eval_scalar(*parse_expression("t^-2"), 2.0) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        parse_expression("t + * 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
        CHECK(!e.expected.empty());
    }
    CHECK_THROWS_AS(parse_expression("foo(t)"), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expression("t^t"), ParseError);
    CHECK_THROWS_AS(parse_expression("(t"), ParseError);
    CHECK_THROWS_AS(parse_expression(""), ParseError);
}

TEST_CASE("pretty_print round trip") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        ExprPtr e = testkit::random_expression(rng, 3);
        std::string printed = pretty_print(e);
        ExprPtr re = parse_expression(printed);
        CHECK(pretty_print(re) == printed);
        for (double t : {-0.7, 0.1, 1.3})
            CHECK(eval_scalar(*re, t) == doctest::Approx(eval_scalar(*e, t)).epsilon(1e-12));
    }
}

TEST_CASE("eval_jet matches finite differences of eval_scalar") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 50; ++i) {
        ExprPtr e = testkit::random_expression(rng, 3);
        double t0 = testkit::uni(rng, -1, 1);
        Jet j = eval_jet(*e, t0, 6);
        auto f = [&](double x) { return eval_scalar(*e, x); };
        double scale = 0.0;
        for (int m = 1; m <= 6; ++m) scale = std::max(scale, std::abs(j.derivative(m)));
        for (int m = 1; m <= 4; ++m) {
            double fd = testkit::fd_derivative(f, t0, m, 0.3);
            double diff = std::abs(fd - j.derivative(m));
            CHECK(diff <=
                  1e-5 * std::max({std::abs(fd), std::abs(j.derivative(m)), 1e-2 * scale}) + 1e-8);
        }
    }
}

TEST_CASE("load_spec: curve, family, poly shorthand, rejection") {
    auto spec = load_spec(R"json({"kind":"curve","x":"t","y":"t^2","z":"t^4","t_range":[-1,1]})json");
    auto* c = std::get_if<SpaceCurve>(&spec);
    REQUIRE(c != nullptr);
    CHECK(curve_point(*c, 0.5).y == doctest::Approx(0.25));

    auto fspec = load_spec(
        R"json({"kind":"family","x":"t^2+t^3+t^4","y":"s1*t+t^3+t^4","z":"s2*t+t^3-t^4",
            "t_range":[-0.5,0.5],"s_box":[[-0.2,0.2],[-0.2,0.2]]})json");
    auto* f = std::get_if<DeformationFamily>(&fspec);
    REQUIRE(f != nullptr);
    Jet x = eval_component_jet(*f, 0, 0.0, {0.0, 0.0}, 4);
    CHECK(x[2] == doctest::Approx(1.0));
    CHECK(x[3] == doctest::Approx(1.0));
    CHECK(x[4] == doctest::Approx(1.0));
    Jet y = eval_component_jet(*f, 1, 0.0, {0.1, 0.0}, 4);
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(0.1));
    CHECK(y[2] == doctest::Approx(0.0));
    CHECK(y[3] == doctest::Approx(1.0));
    CHECK(y[4] == doctest::Approx(1.0));

    auto pspec = load_spec(
        R"json({"kind":"curve","poly":[[0,1],[0,0,1],[0,0,0,0,1]],"t_range":[-1,1]})json");
    auto* pc = std::get_if<SpaceCurve>(&pspec);
    REQUIRE(pc != nullptr);
    CHECK(curve_point(*pc, 2.0).z == doctest::Approx(16.0));

    CHECK_THROWS_AS(load_spec(R"json({"kind":"curve","x":"t","y":"t^2","t_range":[-1,1]})json"),
                    SchemaError);
    CHECK_THROWS_AS(load_spec(R"json({"kind":"curve","x":"t","y":"t","z":"t","t_range":[-1,1],
                                  "extra":1})json"),
                    SchemaError);
    CHECK_THROWS_AS(load_spec(R"json({"kind":"widget","x":"t","y":"t","z":"t","t_range":[-1,1]})json"),
                    SchemaError);
    CHECK_THROWS_AS(load_spec(""), SchemaError);
    CHECK_THROWS_AS(load_spec(R"json({"kind":"curve","x":"t+","y":"t","z":"t","t_range":[-1,1]})json"),
                    ParseError);
    CHECK_THROWS_AS(
        load_spec(R"json({"kind":"curve","x":"s1*t","y":"t","z":"t","t_range":[-1,1]})json"),
        SchemaError);
    CHECK_THROWS_AS(
        load_spec(R"json({"kind":"family","x":"t","y":"t","z":"t","t_range":[-1,1]})json"),
        SchemaError);
}

TEST_CASE("eval_component_jet at K=0 is point evaluation") {
    auto spec = load_spec(R"json({"kind":"curve","x":"sin(t)","y":"cos(t)","z":"t","t_range":[-4,4]})json");
    auto& c = std::get<SpaceCurve>(spec);
    Jet j = eval_component_jet(c, 0, 0.8, 0);
    CHECK(j.degree() == 0);
    CHECK(j.value() == doctest::Approx(std::sin(0.8)));
}

TEST_CASE("rigid motion and reparametrization rebuild trees correctly") {
    std::mt19937_64 rng(5);
    auto spec = load_spec(R"json({"kind":"curve","x":"t","y":"t^2","z":"t^4","t_range":[-1,1]})json");
    auto& c = std::get<SpaceCurve>(spec);
    Mat3 R = testkit::random_rotation(rng);
    Vec3 d{0.3, -0.2, 0.9};
    SpaceCurve moved = rigidly_moved(c, R, d);
    for (double t : {-0.6, 0.2, 0.9}) {
        Vec3 want = R.apply(curve_point(c, t)) + d;
        Vec3 got = curve_point(moved, t);
        CHECK((got - want).norm() < 1e-14);
    }
    ExprPtr sub = parse_expression("t + 0.3*t^2");
    SpaceCurve re = reparametrized(c, sub, -0.5, 0.5);
    for (double t : {-0.4, 0.1, 0.5}) {
        Vec3 want = curve_point(c, t + 0.3 * t * t);
        Vec3 got = curve_point(re, t);
        CHECK((got - want).norm() < 1e-14);
    }
}
