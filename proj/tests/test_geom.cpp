#include <doctest.h>

#include <cmath>

#include "apo/geom.hpp"
#include "test_support.hpp"

using namespace apo;

TEST_CASE("general form to circle and back") {
    const Circle unit = circle_from_general(GeneralForm{0, 0, -1});
    CHECK(unit.center.x == doctest::Approx(0.0));
    CHECK(unit.radius == doctest::Approx(1.0));

    const Circle shifted = circle_from_general(GeneralForm{-6, 0, 8});
    CHECK(shifted.center.x == doctest::Approx(3.0));
    CHECK(shifted.center.y == doctest::Approx(0.0));
    CHECK(shifted.radius == doctest::Approx(1.0));

    CHECK_ERRC(circle_from_general(GeneralForm{0, 0, 1}), Errc::imaginary_circle);

    const GeneralForm g = general_from_circle(Circle{{3, 0}, 1});
    CHECK(g.a == doctest::Approx(-6.0));
    CHECK(g.b == doctest::Approx(0.0));
    CHECK(g.c == doctest::Approx(8.0));
}

TEST_CASE("round-trip general form over radii 1e-3..1e3") {
    std::mt19937_64 rng(7101);
    for (int i = 0; i < 500; ++i) {
        // Center offsets scale with the radius; the quadratic coefficient c
        // cancels catastrophically for tiny circles far from the origin, so
        // the representation is only exact for scale-consistent circles.
        const double r = std::pow(10.0, apotest::uniform(rng, -3.0, 3.0));
        const Circle c{apotest::random_point(rng, 3.0 * r), r};
        const Circle back = circle_from_general(general_from_circle(c),
                                                Tolerance::for_scale(std::max(1.0, 2 * r)));
        CHECK(std::abs(back.center.x - c.center.x) <= 1e-12 * std::max(r, std::abs(c.center.x)));
        CHECK(std::abs(back.center.y - c.center.y) <= 1e-12 * std::max(r, std::abs(c.center.y)));
        CHECK(std::abs(back.radius - c.radius) <= 1e-12 * c.radius);
    }
}

TEST_CASE("power of a point") {
    const Circle c{{3, 0}, 1};
    CHECK(power_of_point({0, 0}, c) == doctest::Approx(8.0));
    CHECK(power_of_point({3, 0}, c) == doctest::Approx(-1.0));
    CHECK(power_of_point({2, 0}, c) == doctest::Approx(0.0));
}

TEST_CASE("power vanishes on sampled boundary points") {
    std::mt19937_64 rng(7102);
    const Tolerance tol = Tolerance::for_scale(20.0);
    for (int i = 0; i < 200; ++i) {
        const Circle c{apotest::random_point(rng, 8.0), apotest::uniform(rng, 0.1, 5.0)};
        const double ang = apotest::uniform(rng, 0.0, 6.283185307179586);
        const Point2 p = c.center + c.radius * Vec2{std::cos(ang), std::sin(ang)};
        CHECK(std::abs(power_of_point(p, c)) <= tol.quadratic());
    }
}

TEST_CASE("perpendicular bisector") {
    const Line2 v = perpendicular_bisector({0, 0}, {4, 0});
    CHECK(std::abs(v.signed_distance({2.0, 17.0})) == doctest::Approx(0.0));
    CHECK(std::abs(v.signed_distance({0.0, 0.0})) == doctest::Approx(2.0));

    const Line2 h = perpendicular_bisector({0, 0}, {0, 2});
    CHECK(std::abs(h.signed_distance({-5.0, 1.0})) == doctest::Approx(0.0));

    CHECK_ERRC(perpendicular_bisector({0, 0}, {0, 0}), Errc::coincident_points);
}

TEST_CASE("circumcenter examples") {
    const Point2 right = circumcenter({0, 0}, {4, 0}, {0, 4});
    CHECK(right.x == doctest::Approx(2.0));
    CHECK(right.y == doctest::Approx(2.0));

    const Point2 equi = circumcenter({0, 0}, {2, 0}, {1, std::sqrt(3.0)});
    CHECK(equi.x == doctest::Approx(1.0));
    CHECK(equi.y == doctest::Approx(1.0 / std::sqrt(3.0)));

    CHECK_ERRC(circumcenter({0, 0}, {1, 0}, {2, 0}), Errc::collinear_points);
}

TEST_CASE("circumcenter equidistance over random triples") {
    std::mt19937_64 rng(7103);
    const Tolerance tol = Tolerance::for_scale(20.0);
    int checked = 0;
    while (checked < 1000) {
        const Point2 p1 = apotest::random_point(rng, 10.0);
        const Point2 p2 = apotest::random_point(rng, 10.0);
        const Point2 p3 = apotest::random_point(rng, 10.0);
        if (collinear(p1, p2, p3, Tolerance::for_scale(20.0, 1e-6))) continue;
        const Point2 o = circumcenter(p1, p2, p3, tol);
        const double d1 = distance(o, p1);
        const double d2 = distance(o, p2);
        const double d3 = distance(o, p3);
        const double spread =
            std::max({d1, d2, d3}) - std::min({d1, d2, d3});
        // Scale the bound with the circumradius; near-degenerate triples
        // produce distant centers.
        CHECK(spread <= 1e-9 * std::max(20.0, d1));
        ++checked;
    }
}

TEST_CASE("line intersection") {
    const Line2 x2{{1, 0}, 2};
    const Line2 y3{{0, 1}, 3};
    const Point2 p = line_intersection(x2, y3);
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == doctest::Approx(3.0));

    CHECK_ERRC(line_intersection(Line2{{1, 0}, 1}, Line2{{1, 0}, 2}), Errc::parallel_lines);

    // x + 3y = 6 and x = 1.9
    const double inv = 1.0 / std::sqrt(10.0);
    const Point2 q = line_intersection(Line2{{inv, 3 * inv}, 6 * inv}, Line2{{1, 0}, 1.9});
    CHECK(q.x == doctest::Approx(1.9));
    CHECK(q.y == doctest::Approx(4.1 / 3.0));
}

TEST_CASE("foot of perpendicular") {
    const Point2 f = foot_of_perpendicular({5, 5}, Line2{{1, 0}, 2});
    CHECK(f.x == doctest::Approx(2.0));
    CHECK(f.y == doctest::Approx(5.0));

    const Line2 diag{{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, 2.0 / std::sqrt(2.0)};
    const Point2 g = foot_of_perpendicular({0, 0}, diag);
    CHECK(g.x == doctest::Approx(1.0));
    CHECK(g.y == doctest::Approx(1.0));

    const Point2 on = foot_of_perpendicular({2, 7}, Line2{{1, 0}, 2});
    CHECK(on.x == doctest::Approx(2.0));
    CHECK(on.y == doctest::Approx(7.0));
}

TEST_CASE("tangency classification") {
    const TangencyClass ext = tangency_classify(Circle{{0, 0}, 1}, Circle{{3, 0}, 2});
    CHECK(ext.kind == Tangency::external);
    CHECK(ext.residual == doctest::Approx(0.0));

    const TangencyClass inn = tangency_classify(Circle{{0, 0}, 3}, Circle{{1, 0}, 2});
    CHECK(inn.kind == Tangency::internal);
    CHECK(inn.residual == doctest::Approx(0.0));

    const TangencyClass far = tangency_classify(Circle{{0, 0}, 1}, Circle{{10, 0}, 1});
    CHECK(far.kind == Tangency::none);
    CHECK(far.residual == doctest::Approx(8.0));
}

TEST_CASE("tangency residual is rigid-motion invariant") {
    std::mt19937_64 rng(7104);
    for (int i = 0; i < 300; ++i) {
        const Circle c1{apotest::random_point(rng, 5.0), apotest::uniform(rng, 0.1, 3.0)};
        const Circle c2{apotest::random_point(rng, 5.0), apotest::uniform(rng, 0.1, 3.0)};
        const double ang = apotest::uniform(rng, 0.0, 6.28);
        const Vec2 shift = apotest::random_point(rng, 4.0);
        const auto rot = [&](Point2 p) {
            return Point2{std::cos(ang) * p.x - std::sin(ang) * p.y,
                          std::sin(ang) * p.x + std::cos(ang) * p.y} +
                   shift;
        };
        const double before = tangency_classify(c1, c2).residual;
        const double after =
            tangency_classify(Circle{rot(c1.center), c1.radius}, Circle{rot(c2.center), c2.radius})
                .residual;
        CHECK(std::abs(before - after) <= 1e-12 * 20.0);
    }
}

TEST_CASE("collinear predicate") {
    CHECK(collinear({0, 0}, {1, 0}, {2, 0}));
    CHECK_FALSE(collinear({0, 0}, {4, 0}, {0, 4}));
    CHECK(collinear({0, 0}, {1, 1e-15}, {2, 0}));
}

TEST_CASE("tolerance validation") {
    CHECK_ERRC(Tolerance::for_scale(-1.0), Errc::invalid_argument);
    CHECK_ERRC(Tolerance::for_scale(1.0, 0.1), Errc::invalid_argument);
    const Tolerance t = Tolerance::for_scale(100.0);
    CHECK(t.linear() == doctest::Approx(1e-7));
}
