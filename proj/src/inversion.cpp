#include "apo/inversion.hpp"

#include <cmath>

namespace apo {

namespace {

void check_power(double power) {
    if (!(power > 0.0) || !std::isfinite(power))
        fail(Errc::invalid_argument, "inversion power must be positive and finite");
}

}  // namespace

Point2 invert_point(const InversionMap& m, Point2 p, const Tolerance& tol) {
    check_power(m.power);
    const Vec2 d = p - m.center;
    const double d2 = norm2(d);
    if (std::sqrt(d2) <= tol.linear())
        fail(Errc::center_has_no_image, "point coincides with the inversion center");
    return m.center + (m.power / d2) * d;
}

std::vector<double> invert_point_nd(const std::vector<double>& center, double power,
                                    const std::vector<double>& p, const Tolerance& tol) {
    check_power(power);
    if (center.size() != p.size() || center.empty())
        fail(Errc::dimension_mismatch, "center and point must share a dimension >= 1");
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double di = p[i] - center[i];
        d2 += di * di;
    }
    if (std::sqrt(d2) <= tol.linear())
        fail(Errc::center_has_no_image, "point coincides with the inversion center");
    std::vector<double> out(p.size());
    const double s = power / d2;
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = center[i] + s * (p[i] - center[i]);
    return out;
}

GeneralizedCircle invert_generalized(const InversionMap& m, const GeneralizedCircle& g,
                                     const Tolerance& tol) {
    check_power(m.power);
    if (g.is_circle()) {
        const Circle& c = g.circle();
        const double p = power_of_point(m.center, c);
        if (std::abs(p) <= tol.quadratic()) {
            // Circle through the center: image is the line through the image
            // of the point of c antipodal to the center, perpendicular to the
            // center line.
            const Vec2 d = c.center - m.center;
            const double len = norm(d);
            if (len <= tol.linear())
                fail(Errc::center_has_no_image,
                     "degenerate circle straddling the inversion center");
            const Vec2 u = (1.0 / len) * d;
            const Point2 antipode = c.center + c.radius * u;
            const Point2 img = invert_point(m, antipode, tol);
            return GeneralizedCircle(Line2{u, dot(u, img)});
        }
        // Signed homothety; a negative ratio (center inside) lands the image
        // center on the opposite ray, which the formula already handles.
        const double ratio = m.power / p;
        return GeneralizedCircle(Circle{m.center + ratio * (c.center - m.center),
                                        std::abs(ratio) * c.radius});
    }
    const Line2& l = g.line();
    const double sd = l.signed_distance(m.center);
    if (std::abs(sd) <= tol.linear()) return g;  // line through the center is fixed
    const Point2 foot = m.center - sd * l.normal;
    const Point2 img = invert_point(m, foot, tol);  // diametrically opposite the center
    return GeneralizedCircle(
        Circle{midpoint(m.center, img), 0.5 * distance(m.center, img)});
}

double concentric_composition_ratio(double k2, double r2) {
    check_power(k2);
    check_power(r2);
    return k2 / r2;
}

TangencyClass tangency_classify(const GeneralizedCircle& g, const Circle& c,
                                const Tolerance& tol) {
    if (g.is_circle()) return tangency_classify(g.circle(), c, tol);
    return tangency_classify(g.line(), c, tol);
}

}  // namespace apo
