#include <doctest.h>

#include <cmath>
#include <set>

#include "apo/construction.hpp"
#include "apo/report_io.hpp"
#include "test_support.hpp"

using namespace apo;

namespace {

// Independent shrink oracle: per-circle R^2 = (R_i^2 - (1 - m^2)|AO_i|^2) / m^2.
std::array<double, 3> shrink_oracle(const Scene& scene, Point2 a, double m2) {
    std::array<double, 3> out{};
    for (int i = 1; i <= 3; ++i) {
        const Circle& c = scene.circle(i);
        out[static_cast<std::size_t>(i - 1)] =
            (c.radius * c.radius - (1.0 - m2) * norm2(a - c.center)) / m2;
    }
    return out;
}

double locus_value(const Scene& scene, int i, int j, Point2 x) {
    return norm2(x - scene.circle(j).center) - norm2(x - scene.circle(i).center);
}

}  // namespace

TEST_CASE("scene validation") {
    const Scene ok = apotest::pinned_scene();
    CHECK(ok.circle(1).radius == doctest::Approx(1.0));
    CHECK(ok.circle(3).center.y == doctest::Approx(6.0));

    // sorted by radius ascending regardless of input order
    const Scene shuffled = Scene::validate(
        {Circle{{2, 6}, 3}, Circle{{0, 0}, 1}, Circle{{5, 0}, 2}});
    CHECK(shuffled.circle(1).center.x == doctest::Approx(0.0));
    CHECK(shuffled.circle(2).center.x == doctest::Approx(5.0));

    CHECK_ERRC(Scene::validate({Circle{{0, 0}, 1}, Circle{{0, 0}, 2}, Circle{{5, 0}, 1}}),
               Errc::concentric_input);
    CHECK_ERRC(Scene::validate({Circle{{0, 0}, 5}, Circle{{1, 0}, 0.5}, Circle{{20, 0}, 1}}),
               Errc::nested_input);
    CHECK_ERRC(Scene::validate({Circle{{0, 0}, 1}, Circle{{0, 0}, 1}, Circle{{5, 0}, 2}}),
               Errc::duplicate_circle);
    CHECK_ERRC(Scene::validate({Circle{{0, 0}, -1}, Circle{{4, 0}, 1}, Circle{{8, 0}, 1}}),
               Errc::invalid_argument);
}

TEST_CASE("difference line carries the prescribed power gap") {
    const Scene scene = apotest::pinned_scene();

    // pair (2,3) at m^2 = 1/2: |XO_3|^2 - |XO_2|^2 = (9 - 4) / (1/2) = 10
    const Line2 l23 = difference_line(scene, 2, 3, 0.5);
    const Point2 foot = l23.offset * l23.normal;
    const Vec2 along = perp(l23.normal);
    CHECK(locus_value(scene, 2, 3, foot) == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(locus_value(scene, 2, 3, foot + 3.7 * along) == doctest::Approx(10.0).epsilon(1e-9));

    // perpendicular to the center segment
    const Vec2 seg = scene.circle(3).center - scene.circle(2).center;
    CHECK(std::abs(cross(l23.normal, (1.0 / norm(seg)) * seg)) <= 1e-12);

    // offset from the midpoint: (R_3^2 - R_2^2)/|O_2O_3| toward the smaller circle
    const Point2 mid = midpoint(scene.circle(2).center, scene.circle(3).center);
    const double toward_o2 =
        dot(foot_of_perpendicular(mid, l23) - mid, (1.0 / norm(seg)) * (-1.0 * seg));
    CHECK(toward_o2 == doctest::Approx(5.0 / norm(seg)).epsilon(1e-9));

    // pair (1,2) at m^2 = 1/2 is the vertical line x = 1.9
    const Line2 l12 = difference_line(scene, 1, 2, 0.5);
    CHECK(std::abs(l12.signed_distance({1.9, -4.0})) <= 1e-12);
    CHECK(std::abs(l12.signed_distance({1.9, 11.0})) <= 1e-12);

    // equal radii: perpendicular bisector for any m^2
    const Scene equi = apotest::equilateral_scene();
    for (double m2 : {0.2, 0.5, 0.9}) {
        const Line2 l = difference_line(equi, 1, 2, m2);
        CHECK(std::abs(l.signed_distance(midpoint(equi.circle(1).center, equi.circle(2).center))) <=
              1e-12);
    }
}

TEST_CASE("reflection center matches the hand-solved loci") {
    const Scene scene = apotest::pinned_scene();

    const auto [a_half, lines_half] = reflection_center(scene, 0.5);
    CHECK(std::abs(a_half.x - 1.9) <= 1e-9);
    CHECK(std::abs(a_half.y - 41.0 / 30.0) <= 1e-9);
    CHECK(std::abs(lines_half[2].signed_distance(a_half)) <= 1e-9 * scene.tolerance().scale);

    const auto [a_34, lines_34] = reflection_center(scene, 0.75);
    CHECK(std::abs(a_34.x - 1.3) <= 1e-9);
    CHECK(std::abs(a_34.y - 7.0 / 30.0) <= 1e-9);
    CHECK(std::abs(lines_34[2].signed_distance(a_34)) <= 1e-9 * scene.tolerance().scale);

    // equal radii at equilateral centers: A is the circumcenter for any m^2
    const Scene equi = apotest::equilateral_scene();
    const Point2 cc = circumcenter(equi.circle(1).center, equi.circle(2).center,
                                   equi.circle(3).center, equi.tolerance());
    for (double m2 : {0.3, 0.75}) {
        const auto [a, lines] = reflection_center(equi, m2);
        CHECK(distance(a, cc) <= 1e-9 * equi.tolerance().scale);
    }

    CHECK_ERRC(reflection_center(apotest::collinear_scene(), 0.5), Errc::parallel_loci);
}

TEST_CASE("shrink radius from the power relation") {
    const Scene scene = apotest::pinned_scene();
    const auto [a, lines] = reflection_center(scene, 0.75);

    const std::array<double, 3> oracle = shrink_oracle(scene, a, 0.75);
    const double r = shrink_radius(scene, a, 0.75);
    CHECK(r == doctest::Approx(0.8670939).epsilon(1e-5));
    for (double v : oracle) {
        CHECK(v == doctest::Approx(r * r).epsilon(1e-9));
    }

    // m^2 = 1/2 pushes R^2 = 2 - |AO_1|^2 below zero on this scene.
    const auto [a_half, lines_half] = reflection_center(scene, 0.5);
    CHECK(norm2(a_half - scene.circle(1).center) > 2.0);
    CHECK_ERRC(shrink_radius(scene, a_half, 0.5), Errc::infeasible_shrink);

    // equilateral equal circles at m^2 = 0.9: R^2 = (10 - 16/3) / 9
    const Scene equi = apotest::equilateral_scene();
    const auto [ae, le] = reflection_center(equi, 0.9);
    const double re = shrink_radius(equi, ae, 0.9);
    CHECK(re * re == doctest::Approx((10.0 - 16.0 / 3.0) / 9.0).epsilon(1e-9));
}

TEST_CASE("feasibility scan behavior") {
    const Scene scene = apotest::pinned_scene();

    // direct hit: requested value is feasible, no scan recorded
    const FeasibleChoice direct = choose_feasible_m2(scene, 0.75);
    CHECK(direct.m_squared == doctest::Approx(0.75));
    CHECK_FALSE(direct.scan.has_value());
    CHECK_FALSE(direct.degenerate_loci);

    // requested 1/2 is infeasible; the scan lands on the first feasible grid point
    const FeasibleChoice scanned = choose_feasible_m2(scene, 0.5);
    CHECK(scanned.m_squared == doctest::Approx(0.70));
    REQUIRE(scanned.scan.has_value());
    CHECK(scanned.scan->requested == doctest::Approx(0.5));
    CHECK(scanned.scan->probes.size() > 2);
    REQUIRE(scanned.scan->boundary.has_value());
    CHECK(*scanned.scan->boundary > 0.65);
    CHECK(*scanned.scan->boundary <= 0.70);
    const double r = shrink_radius(scene, scanned.reflection_center, scanned.m_squared);
    CHECK(r == doctest::Approx(scanned.shrink));

    // equilateral scene accepts 0.9 untouched
    const FeasibleChoice equi = choose_feasible_m2(apotest::equilateral_scene(), 0.9);
    CHECK(equi.m_squared == doctest::Approx(0.9));
    CHECK_FALSE(equi.scan.has_value());

    // two near-concentric large circles and a tiny far one: nothing works
    const Scene hopeless = Scene::validate(
        {Circle{{0, 0}, 5.0}, Circle{{0.2, 0.3}, 5.05}, Circle{{30, 0}, 0.05}});
    try {
        choose_feasible_m2(hopeless, 0.5);
        FAIL("expected NoFeasibleM2");
    } catch (const NoFeasibleM2Error& e) {
        CHECK(e.scan().probes.size() == 20);  // requested + 19 grid points
        for (const ScanProbe& p : e.scan().probes) CHECK_FALSE(p.feasible);
    }
}

TEST_CASE("tangent circle to the three equal circles") {
    const Tolerance tol = Tolerance::for_scale(10.0);
    const std::array<Point2, 3> tri{Point2{0, 0}, Point2{4, 0}, Point2{0, 4}};

    const GeneralizedCircle outer = tangent_to_equal_circles(tri, 0.5, TangentVariant::outer_tangent, tol);
    REQUIRE(outer.is_circle());
    CHECK(outer.circle().center.x == doctest::Approx(2.0));
    CHECK(outer.circle().center.y == doctest::Approx(2.0));
    CHECK(outer.circle().radius == doctest::Approx(std::sqrt(8.0) - 0.5));
    for (const Point2& c : tri) {
        const TangencyClass t = tangency_classify(outer.circle(), Circle{c, 0.5}, tol);
        CHECK(t.kind == Tangency::external);
        CHECK(t.residual <= tol.linear());
    }

    const GeneralizedCircle enclosing = tangent_to_equal_circles(tri, 0.5, TangentVariant::enclosing, tol);
    REQUIRE(enclosing.is_circle());
    CHECK(enclosing.circle().radius == doctest::Approx(std::sqrt(8.0) + 0.5));
    for (const Point2& c : tri) {
        const TangencyClass t = tangency_classify(enclosing.circle(), Circle{c, 0.5}, tol);
        CHECK(t.kind == Tangency::internal);
        CHECK(t.residual <= tol.linear());
    }

    const GeneralizedCircle line = tangent_to_equal_circles(
        {Point2{0, 0}, Point2{3, 0}, Point2{7, 0}}, 1.0, TangentVariant::outer_tangent, tol);
    REQUIRE(line.is_line());
    CHECK(std::abs(line.line().signed_distance({0.0, 1.0})) <= 1e-12);
    CHECK(std::abs(line.line().signed_distance({5.0, 1.0})) <= 1e-12);

    CHECK_ERRC(tangent_to_equal_circles(tri, 3.0, TangentVariant::outer_tangent, tol),
               Errc::tangent_radius_nonpositive);
}

TEST_CASE("pipeline on the pinned scene") {
    const Scene scene = apotest::pinned_scene();
    const double scale = scene.tolerance().scale;
    const PipelineResult result = run_pipeline(scene);

    CHECK(result.m_squared == doctest::Approx(0.75));
    CHECK_FALSE(result.scan.has_value());
    CHECK(result.k2 == doctest::Approx(45.0));
    CHECK(result.kp2 / result.k2 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));

    CHECK(result.residuals.power_ratio_dev < 1e-9);
    CHECK(result.residuals.concurrency_dev < 1e-9 * scale);
    for (double v : result.residuals.c4_tangency) CHECK(v < 1e-9 * scale);
    for (double v : result.residuals.c4p_tangency) CHECK(v < 1e-9 * scale);

    // the spot ratio from the derivation: pow(A,C_1)/pow(A,uC_1) = 0.75
    const double pc = power_of_point(result.reflection_center, scene.circle(1));
    const double pu = power_of_point(result.reflection_center, result.equal_circles[0]);
    CHECK(pc == doctest::Approx(0.744444).epsilon(1e-5));
    CHECK(pu == doctest::Approx(0.992593).epsilon(1e-5));
    CHECK(pc / pu == doctest::Approx(0.75).epsilon(1e-12));

    // every construction stage shows up in the trace
    for (const char* stage :
         {"4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8", "4.9", "4.10"})
        CHECK_MESSAGE(result.trace.contains_stage(stage), stage);
    CHECK_FALSE(result.trace.contains_stage("3.1.8"));
    result.trace.check_valid();

    // key labels present exactly once
    std::set<std::string> labels;
    for (const TraceStep& s : result.trace.steps)
        if (!s.label.empty()) labels.insert(s.label);
    for (const char* want : {"uC_1", "uC_2", "uC_3", "O''", "Z", "C_4", "M_1", "M_2", "M_3",
                             "H_1", "H_2", "H_3", "A", "K", "K'", "C'_1", "C'_2", "C'_3",
                             "C'_4", "C''_1", "C''_2", "C''_3", "C''_4"})
        CHECK_MESSAGE(labels.count(want) == 1, want);

    // deterministic serialization
    const PipelineResult again = run_pipeline(scene);
    CHECK(dump_report(construct_json(result)) == dump_report(construct_json(again)));
    CHECK(dump_report(trace_json(result.trace)) == dump_report(trace_json(again.trace)));
}

TEST_CASE("pipeline completes on collinear centers via the tangent line") {
    const Scene scene = apotest::collinear_scene();
    const PipelineResult result = run_pipeline(scene);

    CHECK(result.degenerate_loci);
    CHECK(result.trace.contains_stage("3.1.8"));
    CHECK_FALSE(result.trace.contains_stage("4.5"));
    REQUIRE(result.c4.is_line());

    // C4' is the image of a line missing the center: a circle through A
    REQUIRE(result.c4p.is_circle());
    CHECK(std::abs(power_of_point(result.reflection_center, result.c4p.circle())) <=
          scene.tolerance().quadratic());

    // the double inversion is a homothety about A, so C4'' is a line again
    REQUIRE(result.c4pp.is_line());

    // honest residuals: finite, and the locus compromise is visible
    CHECK(std::isfinite(result.residuals.power_ratio_dev));
    CHECK(result.residuals.power_ratio_dev > 1e-3);
    for (double v : result.residuals.c4_tangency) CHECK(v <= 1e-9 * scene.tolerance().scale);
    for (double v : result.residuals.final_tangency) CHECK(std::isfinite(v));
}

TEST_CASE("no-scan mode propagates infeasibility") {
    PipelineConfig config;
    config.m_squared = 0.5;
    config.feasibility_scan = false;
    CHECK_ERRC(run_pipeline(apotest::pinned_scene(), config), Errc::infeasible_shrink);

    // with the scan on, the same request succeeds on a different m^2
    config.feasibility_scan = true;
    const PipelineResult result = run_pipeline(apotest::pinned_scene(), config);
    CHECK(result.m_squared > 0.5);
    REQUIRE(result.scan.has_value());
}

TEST_CASE("enclosing variant produces the inner-tangent candidate") {
    PipelineConfig config;
    config.variant = TangentVariant::enclosing;
    const Scene scene = apotest::pinned_scene();
    const PipelineResult result = run_pipeline(scene, config);
    REQUIRE(result.c4.is_circle());
    for (const Circle& uc : result.equal_circles) {
        const TangencyClass t = tangency_classify(result.c4.circle(), uc, scene.tolerance());
        CHECK(t.kind == Tangency::internal);
        CHECK(t.residual <= 1e-9 * scene.tolerance().scale);
    }
}

TEST_CASE("residual report recomputation is self-consistent") {
    const Scene scene = apotest::pinned_scene();
    const PipelineResult result = run_pipeline(scene);
    const ResidualReport fresh = residual_report(result, scene);
    CHECK(fresh.power_ratio_dev == result.residuals.power_ratio_dev);
    CHECK(fresh.concurrency_dev == result.residuals.concurrency_dev);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(fresh.c4_tangency[i] == result.residuals.c4_tangency[i]);
        CHECK(fresh.c4p_tangency[i] == result.residuals.c4p_tangency[i]);
        CHECK(fresh.second_inversion_dev[i] == result.residuals.second_inversion_dev[i]);
        CHECK(fresh.final_tangency[i] == result.residuals.final_tangency[i]);
    }
}

TEST_CASE("pipeline laws over random feasible scenes") {
    std::mt19937_64 rng(9301);
    for (int i = 0; i < 50; ++i) {
        const Scene scene = apotest::random_feasible_scene(rng);
        const double scale = scene.tolerance().scale;
        const PipelineResult result = run_pipeline(scene);

        CHECK(result.residuals.power_ratio_dev < 1e-9);
        CHECK(result.residuals.concurrency_dev < 1e-9 * scale);
        for (double v : result.residuals.c4p_tangency) CHECK(v < 1e-8 * scale);
        CHECK(std::abs(result.kp2 / result.k2 - std::sqrt(result.m_squared)) <= 1e-12);

        const std::array<double, 3> oracle =
            shrink_oracle(scene, result.reflection_center, result.m_squared);
        for (double v : oracle)
            CHECK(std::abs(v - result.shrink_radius * result.shrink_radius) <=
                  1e-9 * scale * scale);
    }
}
