#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apo/inversion.hpp"

namespace apo {

/// Three validated input circles, sorted by radius ascending (stable on
/// ties). Rejects concentric pairs, exact duplicates and one-inside-another
/// configurations, which the construction cannot handle.
class Scene {
public:
    static Scene validate(const std::array<Circle, 3>& circles, double eps_rel = 1e-9);

    const std::array<Circle, 3>& circles() const { return circles_; }
    /// 1-based accessor matching the usual C1..C3 naming.
    const Circle& circle(int i) const { return circles_.at(static_cast<std::size_t>(i - 1)); }
    const Tolerance& tolerance() const { return tol_; }

private:
    Scene(std::array<Circle, 3> circles, Tolerance tol)
        : circles_(circles), tol_(tol) {}

    std::array<Circle, 3> circles_;
    Tolerance tol_;
};

enum class TangentVariant { outer_tangent, enclosing };

const char* tangent_variant_name(TangentVariant v);
std::optional<TangentVariant> tangent_variant_from_name(const std::string& name);

struct PipelineConfig {
    /// Ratio of the two inversion powers squared, in (0,1). When the requested
    /// value admits no valid equal-radius system, a grid scan picks another
    /// (unless feasibility_scan is off).
    double m_squared = 0.75;
    std::optional<double> k_squared;  // default: (max pairwise center distance)^2
    TangentVariant variant = TangentVariant::outer_tangent;
    std::optional<double> eps_rel;
    bool feasibility_scan = true;
};

struct ScanProbe {
    double m_squared = 0.0;
    bool feasible = false;
    double r_squared = 0.0;   // candidate shrink radius squared (may be <= 0)
    std::string reason;       // empty when feasible
};

struct FeasibilityScan {
    double requested = 0.0;
    std::vector<ScanProbe> probes;
    /// Feasibility boundary bracketed by the grid and bisected to 1e-6,
    /// when a feasible grid point exists.
    std::optional<double> boundary;
};

/// Raised when neither the requested m^2 nor any grid point admits a valid
/// equal-radius system; carries the per-grid diagnostics.
class NoFeasibleM2Error : public Error {
public:
    explicit NoFeasibleM2Error(FeasibilityScan scan)
        : Error(Errc::no_feasible_m2,
                "no m_squared in the scan grid admits a valid equal-radius system"),
          scan_(std::move(scan)) {}

    const FeasibilityScan& scan() const { return scan_; }

private:
    FeasibilityScan scan_;
};

enum class StepKind { point, segment, line, circle, arc, label };

const char* step_kind_name(StepKind kind);

struct Segment {
    Point2 a;
    Point2 b;
};

struct Arc {
    Point2 center;
    double radius = 1.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
};

/// One drawing action. `stage` identifies the construction stage the step
/// belongs to ("4.1".."4.10", or "3.1.8" for the collinear tangent-line
/// fallback); labels follow the figure conventions ("O''", "Z", "M_1", ...).
struct TraceStep {
    int id = 0;
    StepKind kind = StepKind::point;
    std::variant<Point2, Segment, Line2, Circle, Arc> geometry;
    std::string label;
    std::string stage;
};

struct ConstructionTrace {
    std::vector<TraceStep> steps;

    bool contains_stage(const std::string& stage) const;
    /// Step ids strictly increasing, non-empty labels unique.
    void check_valid() const;
};

struct ResidualReport {
    /// max_i |pow(A, C_i) / pow(A, uC_i) - m^2|
    double power_ratio_dev = 0.0;
    /// distance from A to the third locus line
    double concurrency_dev = 0.0;
    std::array<double, 3> c4_tangency{};             // C4 vs equal circles
    std::array<double, 3> c4p_tangency{};            // C4' vs inverted equal circles
    /// center distance + radius difference between invert(A,k'^2)(C_i) and uC'_i
    std::array<double, 3> second_inversion_dev{};
    std::array<double, 3> final_tangency{};          // C4'' vs original circles
};

struct PipelineResult {
    Point2 reflection_center;
    double m_squared = 0.0;
    double shrink_radius = 0.0;
    double k2 = 0.0;
    double kp2 = 0.0;
    /// Difference lines for pairs (1,2), (1,3), (2,3); A is the intersection
    /// of the first two, the third checks concurrency.
    std::array<Line2, 3> locus_lines;
    std::array<Circle, 3> equal_circles;
    GeneralizedCircle c4;
    std::array<GeneralizedCircle, 3> inverted_equal;
    GeneralizedCircle c4p;
    GeneralizedCircle c4pp;
    TangentVariant variant = TangentVariant::outer_tangent;
    /// True when the centers are collinear and the reflection center was
    /// placed by the documented least-squares fallback instead of a true
    /// locus intersection.
    bool degenerate_loci = false;
    std::optional<FeasibilityScan> scan;
    ResidualReport residuals;
    ConstructionTrace trace;
};

/// The locus of points whose powers differ per {X : |XO_j|^2 - |XO_i|^2 =
/// (R_j^2 - R_i^2) / (1 - m^2)}; perpendicular to the segment O_i O_j.
/// i, j are 1-based scene indices.
Line2 difference_line(const Scene& scene, int i, int j, double m_squared);

/// Reflection center A = intersection of the (1,2) and (1,3) difference
/// lines, plus all three lines. Throws ParallelLoci for collinear centers.
std::pair<Point2, std::array<Line2, 3>> reflection_center(const Scene& scene, double m_squared);

/// Common radius R of the three equal circles, derived from (A, m^2) via
/// R^2 = (R_i^2 - (1 - m^2) |AO_i|^2) / m^2 (averaged over i). Throws
/// InfeasibleShrink unless 0 < R < R_1.
double shrink_radius(const Scene& scene, Point2 a, double m_squared);

struct FeasibleChoice {
    double m_squared = 0.0;
    Point2 reflection_center;
    double shrink = 0.0;
    std::array<Line2, 3> locus_lines;
    bool degenerate_loci = false;
    std::optional<FeasibilityScan> scan;  // present when the grid scan ran
};

/// Tries the requested m^2 first; on failure scans the grid {0.05,...,0.95}
/// and returns the first feasible grid point (bisecting the bracket to 1e-6
/// for the scan diagnostics). Feasible means 0 < R < R_1 and A strictly
/// outside all six circles.
FeasibleChoice choose_feasible_m2(const Scene& scene, double requested);

/// Circle centered at the circumcenter of the three equal-circle centers with
/// radius d - R (outer_tangent) or d + R (enclosing); for collinear centers,
/// the tangent line parallel to the center line on its left side.
GeneralizedCircle tangent_to_equal_circles(const std::array<Point2, 3>& centers, double r,
                                           TangentVariant variant, const Tolerance& tol = {});

/// Full construction: equal circles, tangent circle C4, both inversions,
/// candidate C4'', residual report and replayable trace.
PipelineResult run_pipeline(const Scene& scene, const PipelineConfig& config = {});

/// Recomputes every residual from scratch out of the result's raw objects.
ResidualReport residual_report(const PipelineResult& result, const Scene& scene);

}  // namespace apo
