#pragma once

#include <cmath>
#include <span>

#include "apo/errors.hpp"

namespace apo {

/// 2D point; doubles as a displacement vector, like everywhere in small
/// geometry kernels.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Vec2 = Point2;

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator-(Point2 p) { return {-p.x, -p.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // counterclockwise quarter turn
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

struct Circle {
    Point2 center;
    double radius = 1.0;  // > 0
};

/// Coefficients of x^2 + y^2 + a x + b y + c = 0. Represents a real circle
/// only when (a^2 + b^2)/4 - c > 0.
struct GeneralForm {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Line in normalized implicit form {P : normal . P = offset}, |normal| = 1.
/// Signed distances and perpendicular feet are then single dot products.
struct Line2 {
    Vec2 normal{1.0, 0.0};
    double offset = 0.0;

    double signed_distance(Point2 p) const { return dot(normal, p) - offset; }
};

/// Scene-scaled tolerance policy shared by every predicate in the library.
/// `scale` is the diameter of the scene's bounding box; comparisons use
/// eps_rel * max(scale, 1) for lengths and its square for powers/areas.
struct Tolerance {
    double scale = 1.0;
    double eps_rel = 1e-9;

    double eps() const { return eps_rel; }  // dimensionless (angles, ratios)
    double linear() const { return eps_rel * std::max(scale, 1.0); }
    double quadratic() const {
        const double m = std::max(scale, 1.0);
        return eps_rel * m * m;
    }

    static Tolerance for_scale(double scale, double eps_rel = 1e-9);
    /// Scale = diagonal of the bounding box of the circles (centers +/- radii).
    static Tolerance for_circles(std::span<const Circle> circles, double eps_rel = 1e-9);
};

enum class Tangency { external, internal, none };

struct TangencyClass {
    Tangency kind = Tangency::none;
    /// min(|d - (r1 + r2)|, |d - |r1 - r2||); zero iff the circles are tangent.
    double residual = 0.0;
};

const char* tangency_name(Tangency kind);

Circle circle_from_general(const GeneralForm& g, const Tolerance& tol = {});
GeneralForm general_from_circle(const Circle& c);

/// Signed power |p - center|^2 - radius^2: negative inside, zero on the
/// circle, positive outside.
double power_of_point(Point2 p, const Circle& c);

Line2 perpendicular_bisector(Point2 p, Point2 q, const Tolerance& tol = {});
Point2 circumcenter(Point2 p1, Point2 p2, Point2 p3, const Tolerance& tol = {});
Point2 line_intersection(const Line2& l1, const Line2& l2, const Tolerance& tol = {});
Point2 foot_of_perpendicular(Point2 p, const Line2& l);

TangencyClass tangency_classify(const Circle& c1, const Circle& c2, const Tolerance& tol = {});
/// Line/circle variant: residual is the distance defect |dist(center, line) - r|.
TangencyClass tangency_classify(const Line2& l, const Circle& c, const Tolerance& tol = {});

/// True iff twice the triangle area is below tolerance * max pairwise distance.
bool collinear(Point2 p1, Point2 p2, Point2 p3, const Tolerance& tol = {});

}  // namespace apo
