#pragma once

#include <variant>
#include <vector>

#include "apo/geom.hpp"

namespace apo {

/// Reflection in a circle: center of inversion plus the positive power k^2
/// (the squared radius of the inversion circle).
struct InversionMap {
    Point2 center;
    double power = 1.0;  // k^2 > 0
};

/// A circle or a line; the family closed under inversion. A circle through
/// the inversion center maps to a line and vice versa.
class GeneralizedCircle {
public:
    GeneralizedCircle() : shape_(Circle{}) {}
    GeneralizedCircle(const Circle& c) : shape_(c) {}
    GeneralizedCircle(const Line2& l) : shape_(l) {}

    bool is_circle() const { return std::holds_alternative<Circle>(shape_); }
    bool is_line() const { return std::holds_alternative<Line2>(shape_); }
    const Circle& circle() const { return std::get<Circle>(shape_); }
    const Line2& line() const { return std::get<Line2>(shape_); }

private:
    std::variant<Circle, Line2> shape_;
};

/// p -> center + k^2 (p - center) / |p - center|^2.
/// The center itself has no image; that case is an error here, not a point
/// at infinity.
Point2 invert_point(const InversionMap& m, Point2 p, const Tolerance& tol = {});

/// Same map in n dimensions (n >= 1).
std::vector<double> invert_point_nd(const std::vector<double>& center, double power,
                                    const std::vector<double>& p, const Tolerance& tol = {});

/// Full case analysis: circle away from the center maps by a signed homothety
/// of ratio k^2 / power_of_point(center, g); circle through the center maps to
/// a line; a line maps back to a circle through the center, or to itself when
/// it already passes through it.
GeneralizedCircle invert_generalized(const InversionMap& m, const GeneralizedCircle& g,
                                     const Tolerance& tol = {});

/// Ratio of the homothety produced by composing inversions of powers r2 then
/// k2 about a common center.
double concentric_composition_ratio(double k2, double r2);

/// Tangency of a generalized circle against a plain circle; the line case
/// reports the distance defect as residual.
TangencyClass tangency_classify(const GeneralizedCircle& g, const Circle& c,
                                const Tolerance& tol = {});

}  // namespace apo
