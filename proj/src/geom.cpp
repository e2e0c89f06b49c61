#include "apo/geom.hpp"

#include <algorithm>
#include <limits>

namespace apo {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::imaginary_circle: return "ImaginaryCircle";
        case Errc::coincident_points: return "CoincidentPoints";
        case Errc::collinear_points: return "CollinearPoints";
        case Errc::parallel_lines: return "ParallelLines";
        case Errc::center_has_no_image: return "CenterHasNoImage";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::concentric_input: return "ConcentricInput";
        case Errc::nested_input: return "NestedInput";
        case Errc::duplicate_circle: return "DuplicateCircle";
        case Errc::coincident_centers: return "CoincidentCenters";
        case Errc::parallel_loci: return "ParallelLoci";
        case Errc::degenerate_scene: return "DegenerateScene";
        case Errc::infeasible_shrink: return "InfeasibleShrink";
        case Errc::no_feasible_m2: return "NoFeasibleM2";
        case Errc::tangent_radius_nonpositive: return "TangentRadiusNonpositive";
        case Errc::center_on_object: return "CenterOnObject";
        case Errc::degenerate_linear_system: return "DegenerateLinearSystem";
        case Errc::empty_solution_set: return "EmptySolutionSet";
        case Errc::empty_render: return "EmptyRender";
        case Errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

const char* tangency_name(Tangency kind) {
    switch (kind) {
        case Tangency::external: return "external";
        case Tangency::internal: return "internal";
        case Tangency::none: return "none";
    }
    return "none";
}

Tolerance Tolerance::for_scale(double scale, double eps_rel) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        fail(Errc::invalid_argument, "tolerance scale must be positive and finite");
    if (!(eps_rel > 0.0) || eps_rel > 1e-3)
        fail(Errc::invalid_argument, "eps_rel must lie in (0, 1e-3]");
    return Tolerance{scale, eps_rel};
}

Tolerance Tolerance::for_circles(std::span<const Circle> circles, double eps_rel) {
    if (circles.empty()) return Tolerance{1.0, eps_rel};
    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = lo_x;
    double hi_x = -lo_x;
    double hi_y = -lo_x;
    for (const Circle& c : circles) {
        lo_x = std::min(lo_x, c.center.x - c.radius);
        hi_x = std::max(hi_x, c.center.x + c.radius);
        lo_y = std::min(lo_y, c.center.y - c.radius);
        hi_y = std::max(hi_y, c.center.y + c.radius);
    }
    const double diag = std::hypot(hi_x - lo_x, hi_y - lo_y);
    return for_scale(std::max(diag, 1e-12), eps_rel);
}

Circle circle_from_general(const GeneralForm& g, const Tolerance& tol) {
    const double disc = 0.25 * (g.a * g.a + g.b * g.b) - g.c;
    if (disc <= tol.quadratic())
        fail(Errc::imaginary_circle, "general form has no real circle (discriminant <= 0)");
    return Circle{{-0.5 * g.a, -0.5 * g.b}, std::sqrt(disc)};
}

GeneralForm general_from_circle(const Circle& c) {
    return GeneralForm{-2.0 * c.center.x, -2.0 * c.center.y,
                       norm2(c.center) - c.radius * c.radius};
}

double power_of_point(Point2 p, const Circle& c) {
    return norm2(p - c.center) - c.radius * c.radius;
}

Line2 perpendicular_bisector(Point2 p, Point2 q, const Tolerance& tol) {
    const Vec2 d = q - p;
    const double len = norm(d);
    if (len <= tol.linear())
        fail(Errc::coincident_points, "perpendicular bisector of coincident points");
    const Vec2 n = (1.0 / len) * d;
    return Line2{n, dot(n, midpoint(p, q))};
}

Point2 circumcenter(Point2 p1, Point2 p2, Point2 p3, const Tolerance& tol) {
    if (collinear(p1, p2, p3, tol))
        fail(Errc::collinear_points, "circumcenter of collinear points");
    return line_intersection(perpendicular_bisector(p1, p2, tol),
                             perpendicular_bisector(p1, p3, tol), tol);
}

Point2 line_intersection(const Line2& l1, const Line2& l2, const Tolerance& tol) {
    const double det = cross(l1.normal, l2.normal);
    if (std::abs(det) <= tol.eps())
        fail(Errc::parallel_lines, "lines are parallel within tolerance");
    return Point2{(l1.offset * l2.normal.y - l2.offset * l1.normal.y) / det,
                  (l1.normal.x * l2.offset - l2.normal.x * l1.offset) / det};
}

Point2 foot_of_perpendicular(Point2 p, const Line2& l) {
    return p - l.signed_distance(p) * l.normal;
}

namespace {

TangencyClass classify_from_distance(double d, double r1, double r2, const Tolerance& tol) {
    const double ext = std::abs(d - (r1 + r2));
    const double inn = std::abs(d - std::abs(r1 - r2));
    TangencyClass out;
    out.residual = std::min(ext, inn);
    if (out.residual > tol.linear())
        out.kind = Tangency::none;
    else
        out.kind = ext <= inn ? Tangency::external : Tangency::internal;
    return out;
}

}  // namespace

TangencyClass tangency_classify(const Circle& c1, const Circle& c2, const Tolerance& tol) {
    return classify_from_distance(distance(c1.center, c2.center), c1.radius, c2.radius, tol);
}

TangencyClass tangency_classify(const Line2& l, const Circle& c, const Tolerance& tol) {
    TangencyClass out;
    out.residual = std::abs(std::abs(l.signed_distance(c.center)) - c.radius);
    out.kind = out.residual > tol.linear() ? Tangency::none : Tangency::external;
    return out;
}

bool collinear(Point2 p1, Point2 p2, Point2 p3, const Tolerance& tol) {
    const double twice_area = std::abs(cross(p2 - p1, p3 - p1));
    const double max_dist =
        std::max({distance(p1, p2), distance(p2, p3), distance(p1, p3)});
    return twice_area <= tol.linear() * max_dist;
}

}  // namespace apo
