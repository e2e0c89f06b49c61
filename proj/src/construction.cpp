#include "apo/construction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace apo {

namespace {

constexpr double kScanGridStart = 0.05;
constexpr double kScanGridStep = 0.05;
constexpr int kScanGridCount = 19;          // 0.05 .. 0.95
constexpr double kScanBisectTol = 1e-6;
/// Clearance (as a fraction of R_1) kept between the fallback reflection
/// center and every input circle.
constexpr double kFallbackMargin = 0.25;

void check_m2(double m_squared) {
    if (!(m_squared > 0.0) || !(m_squared < 1.0) || !std::isfinite(m_squared))
        fail(Errc::invalid_argument, "m_squared must lie in (0, 1)");
}

std::array<Point2, 3> centers_of(const Scene& scene) {
    return {scene.circle(1).center, scene.circle(2).center, scene.circle(3).center};
}

struct LocusSolve {
    Point2 a;
    std::array<Line2, 3> lines;
    bool fallback = false;
};

std::array<Line2, 3> all_difference_lines(const Scene& scene, double m_squared) {
    return {difference_line(scene, 1, 2, m_squared), difference_line(scene, 1, 3, m_squared),
            difference_line(scene, 2, 3, m_squared)};
}

/// Least-squares stand-in for the locus intersection when the centers are
/// collinear and the three difference lines are parallel: pick the point with
/// the mean locus offset along the shared normal, lifted off the center line
/// far enough to clear every circle by kFallbackMargin * R_1.
LocusSolve fallback_center(const Scene& scene, const std::array<Line2, 3>& lines) {
    const auto centers = centers_of(scene);
    const Vec2 span = centers[2] - centers[0];
    const double span_len = norm(span);
    if (span_len <= scene.tolerance().linear())
        fail(Errc::degenerate_scene, "coincident extreme centers");
    const Vec2 u = (1.0 / span_len) * span;
    const Vec2 n = perp(u);  // left of the directed center line O1 -> O3

    double mean_offset = 0.0;
    for (const Line2& l : lines) {
        // Fold the normal's sign so all offsets are measured along u.
        mean_offset += dot(l.normal, u) >= 0.0 ? l.offset : -l.offset;
    }
    mean_offset /= 3.0;

    const Point2 centroid =
        (1.0 / 3.0) * (centers[0] + centers[1] + centers[2]);
    const Point2 base = centroid + (mean_offset - dot(u, centroid)) * u;

    double lift = 0.0;
    const double margin = kFallbackMargin * scene.circle(1).radius;
    for (int i = 1; i <= 3; ++i) {
        const Circle& c = scene.circle(i);
        const double along = dot(u, c.center) - mean_offset;
        const double need = (c.radius + margin) * (c.radius + margin) - along * along;
        if (need > 0.0) lift = std::max(lift, std::sqrt(need));
    }
    return LocusSolve{base + lift * n, lines, true};
}

LocusSolve solve_reflection_center(const Scene& scene, double m_squared) {
    const auto lines = all_difference_lines(scene, m_squared);
    const auto centers = centers_of(scene);
    if (collinear(centers[0], centers[1], centers[2], scene.tolerance()))
        return fallback_center(scene, lines);
    try {
        const Point2 a = line_intersection(lines[0], lines[1], scene.tolerance());
        return LocusSolve{a, lines, false};
    } catch (const Error& e) {
        if (e.code() == Errc::parallel_lines) return fallback_center(scene, lines);
        throw;
    }
}

struct ShrinkValues {
    std::array<double, 3> per_circle{};
    double mean = 0.0;  // mean R^2
};

ShrinkValues shrink_values(const Scene& scene, Point2 a, double m_squared) {
    ShrinkValues out;
    for (int i = 1; i <= 3; ++i) {
        const Circle& c = scene.circle(i);
        const double d2 = norm2(a - c.center);
        out.per_circle[static_cast<std::size_t>(i - 1)] =
            (c.radius * c.radius - (1.0 - m_squared) * d2) / m_squared;
    }
    out.mean = (out.per_circle[0] + out.per_circle[1] + out.per_circle[2]) / 3.0;
    return out;
}

struct Candidate {
    double m_squared = 0.0;
    Point2 a;
    double shrink = 0.0;
    std::array<Line2, 3> lines;
    bool fallback = false;
};

struct TryOutcome {
    std::optional<Candidate> candidate;
    double r_squared = 0.0;
    std::string reason;  // set when infeasible
};

TryOutcome try_m2(const Scene& scene, double m_squared) {
    TryOutcome out;
    LocusSolve locus = solve_reflection_center(scene, m_squared);
    const ShrinkValues shrink = shrink_values(scene, locus.a, m_squared);
    out.r_squared = shrink.mean;

    const double r1 = scene.circle(1).radius;
    if (!(shrink.mean > 0.0)) {
        out.reason = "shrink radius squared is nonpositive";
        return out;
    }
    const double r = std::sqrt(shrink.mean);
    if (!(r < r1)) {
        out.reason = "shrink radius not below the smallest input radius";
        return out;
    }
    for (int i = 1; i <= 3; ++i) {
        const Circle& c = scene.circle(i);
        if (distance(locus.a, c.center) - c.radius <= scene.tolerance().linear()) {
            out.reason = "reflection center not strictly outside circle " + std::to_string(i);
            return out;
        }
        // The equal circle is concentric and smaller, so clearing C_i clears it.
    }
    out.candidate = Candidate{m_squared, locus.a, r, locus.lines, locus.fallback};
    return out;
}

class TraceBuilder {
public:
    explicit TraceBuilder(ConstructionTrace& trace) : trace_(trace) {}

    void add(StepKind kind, std::variant<Point2, Segment, Line2, Circle, Arc> geometry,
             std::string label, std::string stage) {
        trace_.steps.push_back(
            TraceStep{next_id_++, kind, std::move(geometry), std::move(label), std::move(stage)});
    }

    void point(Point2 p, std::string label, std::string stage) {
        add(StepKind::point, p, std::move(label), std::move(stage));
    }
    void segment(Point2 a, Point2 b, std::string stage) {
        add(StepKind::segment, Segment{a, b}, "", std::move(stage));
    }
    void line(const Line2& l, std::string label, std::string stage) {
        add(StepKind::line, l, std::move(label), std::move(stage));
    }
    void circle(const Circle& c, std::string label, std::string stage) {
        add(StepKind::circle, c, std::move(label), std::move(stage));
    }
    void generalized(const GeneralizedCircle& g, std::string label, std::string stage) {
        if (g.is_circle())
            circle(g.circle(), std::move(label), std::move(stage));
        else
            line(g.line(), std::move(label), std::move(stage));
    }

private:
    ConstructionTrace& trace_;
    int next_id_ = 1;
};

void build_trace(const Scene& scene, PipelineResult& result,
                 const std::array<GeneralizedCircle, 3>& second_images) {
    const auto centers = centers_of(scene);
    const Tolerance& tol = scene.tolerance();
    TraceBuilder tb(result.trace);

    for (int i = 0; i < 3; ++i)
        tb.circle(result.equal_circles[static_cast<std::size_t>(i)],
                  "uC_" + std::to_string(i + 1), "4.1");

    tb.segment(centers[0], centers[1], "4.2");
    tb.segment(centers[1], centers[2], "4.2");
    tb.segment(centers[0], centers[2], "4.2");

    const bool centers_collinear = result.c4.is_line();
    if (!centers_collinear) {
        tb.line(perpendicular_bisector(centers[0], centers[1], tol), "", "4.3");
        tb.line(perpendicular_bisector(centers[1], centers[2], tol), "", "4.3");
        tb.line(perpendicular_bisector(centers[0], centers[2], tol), "", "4.3");
        const Point2 opp = result.c4.circle().center;
        tb.point(opp, "O''", "4.3");

        // Z marks where the segment from O'' toward O_3 crosses the third
        // equal circle; |O''Z| is the tangent radius.
        const Vec2 to_center = opp - centers[2];
        const double d = norm(to_center);
        const Vec2 u = d > 0.0 ? (1.0 / d) * to_center : Vec2{1.0, 0.0};
        const double sign = result.variant == TangentVariant::outer_tangent ? 1.0 : -1.0;
        const Point2 z = centers[2] + sign * result.shrink_radius * u;
        tb.segment(opp, centers[2], "4.4");
        tb.point(z, "Z", "4.4");
        tb.circle(result.c4.circle(), "C_4", "4.5");
    } else {
        tb.line(result.c4.line(), "C_4", "3.1.8");
    }

    // Midpoints and feet realizing the locus lines: pairs (1,2), (2,3), (1,3)
    // carry (M_1,H_2), (M_2,H_3), (M_3,H_1) in the figure convention.
    struct PairSteps {
        int a, b;
        const char* mid;
        const char* foot;
        const char* line;
        int line_index;
    };
    const PairSteps pairs[] = {{0, 1, "M_1", "H_2", "K_2-K_1", 0},
                               {1, 2, "M_2", "H_3", "K_3-K_2", 2},
                               {0, 2, "M_3", "H_1", "K_3-K_1", 1}};
    for (const PairSteps& p : pairs) {
        const Point2 mid = midpoint(centers[static_cast<std::size_t>(p.a)],
                                    centers[static_cast<std::size_t>(p.b)]);
        const Line2& locus = result.locus_lines[static_cast<std::size_t>(p.line_index)];
        tb.point(mid, p.mid, "4.6");
        tb.point(foot_of_perpendicular(mid, locus), p.foot, "4.6");
        tb.line(locus, p.line, "4.6");
    }
    tb.point(result.reflection_center, "A", "4.6");

    tb.circle(Circle{result.reflection_center, std::sqrt(result.k2)}, "K", "4.7");
    for (int i = 0; i < 3; ++i)
        tb.generalized(result.inverted_equal[static_cast<std::size_t>(i)],
                       "C'_" + std::to_string(i + 1), "4.7");
    tb.generalized(result.c4p, "C'_4", "4.7");

    for (int i = 0; i < 3; ++i)
        tb.generalized(second_images[static_cast<std::size_t>(i)],
                       "C''_" + std::to_string(i + 1), "4.8");

    tb.circle(Circle{result.reflection_center, std::sqrt(result.kp2)}, "K'", "4.9");
    tb.generalized(result.c4pp, "C''_4", "4.10");
}

}  // namespace

Scene Scene::validate(const std::array<Circle, 3>& circles, double eps_rel) {
    for (const Circle& c : circles) {
        if (!(c.radius > 0.0) || !std::isfinite(c.radius) || !std::isfinite(c.center.x) ||
            !std::isfinite(c.center.y))
            fail(Errc::invalid_argument, "circle needs finite center and positive radius");
    }
    std::array<Circle, 3> sorted = circles;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Circle& a, const Circle& b) { return a.radius < b.radius; });
    const Tolerance tol = Tolerance::for_circles(sorted, eps_rel);

    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Circle& small = sorted[i];
            const Circle& big = sorted[j];
            const double d = distance(small.center, big.center);
            if (d <= tol.linear()) {
                if (std::abs(small.radius - big.radius) <= tol.linear())
                    fail(Errc::duplicate_circle, "two input circles coincide");
                fail(Errc::concentric_input, "two input circles are concentric");
            }
            if (d + small.radius < big.radius - tol.linear())
                fail(Errc::nested_input, "one input circle lies strictly inside another");
        }
    }
    return Scene(sorted, tol);
}

const char* tangent_variant_name(TangentVariant v) {
    return v == TangentVariant::outer_tangent ? "outer_tangent" : "enclosing";
}

std::optional<TangentVariant> tangent_variant_from_name(const std::string& name) {
    if (name == "outer_tangent") return TangentVariant::outer_tangent;
    if (name == "enclosing") return TangentVariant::enclosing;
    return std::nullopt;
}

const char* step_kind_name(StepKind kind) {
    switch (kind) {
        case StepKind::point: return "point";
        case StepKind::segment: return "segment";
        case StepKind::line: return "line";
        case StepKind::circle: return "circle";
        case StepKind::arc: return "arc";
        case StepKind::label: return "label";
    }
    return "point";
}

bool ConstructionTrace::contains_stage(const std::string& stage) const {
    return std::any_of(steps.begin(), steps.end(),
                       [&](const TraceStep& s) { return s.stage == stage; });
}

void ConstructionTrace::check_valid() const {
    int last_id = 0;
    std::set<std::string> labels;
    for (const TraceStep& s : steps) {
        if (s.id <= last_id)
            fail(Errc::invalid_argument, "trace step ids must be strictly increasing");
        last_id = s.id;
        if (!s.label.empty() && !labels.insert(s.label).second)
            fail(Errc::invalid_argument, "duplicate trace label " + s.label);
    }
}

Line2 difference_line(const Scene& scene, int i, int j, double m_squared) {
    check_m2(m_squared);
    if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
        fail(Errc::invalid_argument, "difference_line needs distinct indices in 1..3");
    const Circle& ci = scene.circle(i);
    const Circle& cj = scene.circle(j);
    const Vec2 d = cj.center - ci.center;
    const double len = norm(d);
    if (len <= scene.tolerance().linear())
        fail(Errc::coincident_centers, "difference line of coincident centers");
    const Vec2 n = (1.0 / len) * d;
    // From |XO_j|^2 - |XO_i|^2 = (R_j^2 - R_i^2) / (1 - m^2):
    //   2 X . (O_j - O_i) = |O_j|^2 - |O_i|^2 - (R_j^2 - R_i^2) / (1 - m^2)
    const double rhs = norm2(cj.center) - norm2(ci.center) -
                       (cj.radius * cj.radius - ci.radius * ci.radius) / (1.0 - m_squared);
    return Line2{n, rhs / (2.0 * len)};
}

std::pair<Point2, std::array<Line2, 3>> reflection_center(const Scene& scene, double m_squared) {
    const auto lines = all_difference_lines(scene, m_squared);
    const auto centers = centers_of(scene);
    if (collinear(centers[0], centers[1], centers[2], scene.tolerance()))
        fail(Errc::parallel_loci, "collinear centers make the locus lines parallel");
    try {
        return {line_intersection(lines[0], lines[1], scene.tolerance()), lines};
    } catch (const Error& e) {
        if (e.code() == Errc::parallel_lines)
            fail(Errc::parallel_loci, "locus lines are parallel within tolerance");
        throw;
    }
}

double shrink_radius(const Scene& scene, Point2 a, double m_squared) {
    check_m2(m_squared);
    const ShrinkValues v = shrink_values(scene, a, m_squared);
    if (!(v.mean > 0.0))
        fail(Errc::infeasible_shrink, "shrink radius squared is nonpositive at this m_squared");
    const double r = std::sqrt(v.mean);
    if (!(r < scene.circle(1).radius))
        fail(Errc::infeasible_shrink, "shrink radius does not fit inside the smallest circle");
    return r;
}

FeasibleChoice choose_feasible_m2(const Scene& scene, double requested) {
    check_m2(requested);
    TryOutcome first = try_m2(scene, requested);
    if (first.candidate) {
        const Candidate& c = *first.candidate;
        return FeasibleChoice{c.m_squared, c.a, c.shrink, c.lines, c.fallback, std::nullopt};
    }

    FeasibilityScan scan;
    scan.requested = requested;
    scan.probes.push_back(ScanProbe{requested, false, first.r_squared, first.reason});

    std::optional<Candidate> found;
    double below = 0.0;  // last infeasible grid point before the hit
    for (int k = 0; k < kScanGridCount; ++k) {
        const double m2 = kScanGridStart + kScanGridStep * k;
        TryOutcome probe = try_m2(scene, m2);
        scan.probes.push_back(
            ScanProbe{m2, probe.candidate.has_value(), probe.r_squared, probe.reason});
        if (probe.candidate) {
            found = std::move(probe.candidate);
            break;
        }
        below = m2;
    }
    if (!found) throw NoFeasibleM2Error(std::move(scan));

    // Bisect the bracket so the scan records where feasibility begins.
    double lo = below > 0.0 ? below : kScanGridStart * 0.5;
    double hi = found->m_squared;
    while (hi - lo > kScanBisectTol) {
        const double mid = 0.5 * (lo + hi);
        if (try_m2(scene, mid).candidate)
            hi = mid;
        else
            lo = mid;
    }
    scan.boundary = hi;

    return FeasibleChoice{found->m_squared, found->a,       found->shrink,
                          found->lines,     found->fallback, std::move(scan)};
}

GeneralizedCircle tangent_to_equal_circles(const std::array<Point2, 3>& centers, double r,
                                           TangentVariant variant, const Tolerance& tol) {
    if (!(r > 0.0) || !std::isfinite(r))
        fail(Errc::invalid_argument, "equal-circle radius must be positive");
    if (collinear(centers[0], centers[1], centers[2], tol)) {
        const Vec2 span = centers[2] - centers[0];
        const double len = norm(span);
        if (len <= tol.linear())
            fail(Errc::degenerate_scene, "coincident centers in collinear fallback");
        const Vec2 n = perp((1.0 / len) * span);  // left of O1 -> O3
        return GeneralizedCircle(Line2{n, dot(n, centers[0]) + r});
    }
    const Point2 o = circumcenter(centers[0], centers[1], centers[2], tol);
    const double d = distance(o, centers[0]);
    if (variant == TangentVariant::outer_tangent) {
        if (d - r <= tol.linear())
            fail(Errc::tangent_radius_nonpositive,
                 "equal circles reach the circumcenter; no outer tangent circle");
        return GeneralizedCircle(Circle{o, d - r});
    }
    return GeneralizedCircle(Circle{o, d + r});
}

PipelineResult run_pipeline(const Scene& input_scene, const PipelineConfig& config) {
    const Scene scene = config.eps_rel
                            ? Scene::validate(input_scene.circles(), *config.eps_rel)
                            : input_scene;
    const Tolerance& tol = scene.tolerance();
    check_m2(config.m_squared);

    PipelineResult result;
    result.variant = config.variant;

    if (config.feasibility_scan) {
        FeasibleChoice choice = choose_feasible_m2(scene, config.m_squared);
        result.m_squared = choice.m_squared;
        result.reflection_center = choice.reflection_center;
        result.shrink_radius = choice.shrink;
        result.locus_lines = choice.locus_lines;
        result.degenerate_loci = choice.degenerate_loci;
        result.scan = std::move(choice.scan);
    } else {
        TryOutcome outcome = try_m2(scene, config.m_squared);
        if (!outcome.candidate)
            fail(Errc::infeasible_shrink, outcome.reason + " (m_squared = " +
                                              std::to_string(config.m_squared) + ", scan disabled)");
        const Candidate& c = *outcome.candidate;
        result.m_squared = c.m_squared;
        result.reflection_center = c.a;
        result.shrink_radius = c.shrink;
        result.locus_lines = c.lines;
        result.degenerate_loci = c.fallback;
    }

    const auto centers = centers_of(scene);
    for (std::size_t i = 0; i < 3; ++i)
        result.equal_circles[i] = Circle{centers[i], result.shrink_radius};

    result.c4 = tangent_to_equal_circles(centers, result.shrink_radius, config.variant, tol);

    if (config.k_squared) {
        if (!(*config.k_squared > 0.0) || !std::isfinite(*config.k_squared))
            fail(Errc::invalid_argument, "k_squared must be positive and finite");
        result.k2 = *config.k_squared;
    } else {
        const double dmax = std::max({distance(centers[0], centers[1]),
                                      distance(centers[1], centers[2]),
                                      distance(centers[0], centers[2])});
        result.k2 = dmax * dmax;
    }
    result.kp2 = std::sqrt(result.m_squared) * result.k2;

    if (result.c4.is_circle() &&
        std::abs(power_of_point(result.reflection_center, result.c4.circle())) <= tol.quadratic())
        fail(Errc::center_on_object, "reflection center lies on the tangent circle C_4");

    const InversionMap first{result.reflection_center, result.k2};
    for (std::size_t i = 0; i < 3; ++i)
        result.inverted_equal[i] = invert_generalized(first, GeneralizedCircle(result.equal_circles[i]), tol);
    result.c4p = invert_generalized(first, result.c4, tol);

    const InversionMap second{result.reflection_center, result.kp2};
    result.c4pp = invert_generalized(second, result.c4p, tol);

    std::array<GeneralizedCircle, 3> second_images;
    for (std::size_t i = 0; i < 3; ++i)
        second_images[i] =
            invert_generalized(second, GeneralizedCircle(scene.circles()[i]), tol);

    build_trace(scene, result, second_images);
    result.trace.check_valid();
    result.residuals = residual_report(result, scene);
    return result;
}

ResidualReport residual_report(const PipelineResult& result, const Scene& scene) {
    const Tolerance& tol = scene.tolerance();
    ResidualReport report;

    double ratio_dev = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double pc = power_of_point(result.reflection_center, scene.circles()[i]);
        const double pu = power_of_point(result.reflection_center, result.equal_circles[i]);
        ratio_dev = std::max(ratio_dev, std::abs(pc / pu - result.m_squared));
    }
    report.power_ratio_dev = ratio_dev;

    report.concurrency_dev =
        std::abs(result.locus_lines[2].signed_distance(result.reflection_center));

    // A is strictly outside every input and equal circle (feasibility gate),
    // so all their inversion images are plain circles.
    const InversionMap second{result.reflection_center, result.kp2};
    for (std::size_t i = 0; i < 3; ++i) {
        report.c4_tangency[i] = tangency_classify(result.c4, result.equal_circles[i], tol).residual;

        const Circle& inv_equal = result.inverted_equal[i].circle();
        report.c4p_tangency[i] = tangency_classify(result.c4p, inv_equal, tol).residual;

        const Circle img =
            invert_generalized(second, GeneralizedCircle(scene.circles()[i]), tol).circle();
        report.second_inversion_dev[i] = distance(img.center, inv_equal.center) +
                                         std::abs(img.radius - inv_equal.radius);

        report.final_tangency[i] = tangency_classify(result.c4pp, scene.circles()[i], tol).residual;
    }
    return report;
}

}  // namespace apo
