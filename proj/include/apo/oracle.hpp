#pragma once

#include <array>
#include <utility>
#include <vector>

#include "apo/construction.hpp"

namespace apo {

/// One tangent circle found by the algebraic solver. signs[i] is +1 when the
/// solution touches C_i externally and -1 when the tangency is internal
/// (one circle containing the other).
struct SignedSolution {
    Circle circle;
    std::array<int, 3> signs{1, 1, 1};
    double residual = 0.0;  // max over i of the tangency residual
};

struct SolutionSet {
    std::vector<SignedSolution> solutions;  // deduped, sorted by (r, cx, cy)
    double scene_scale = 1.0;
    double tolerance = 0.0;  // absolute residual bound used for acceptance
};

/// Enumerates all sign triples of (x-x_i)^2 + (y-y_i)^2 = (r + s_i r_i)^2,
/// reduces each to a quadratic through pair differences, and keeps verified
/// real solutions with r above tolerance. An empty set is a valid outcome.
SolutionSet solve_ccc(const Scene& scene);

/// Tangency classification of a candidate against each input circle. Line
/// candidates report their distance defect per circle.
std::array<TangencyClass, 3> verify_candidate(const GeneralizedCircle& candidate,
                                              const Scene& scene);

/// Solution minimizing center distance + |radius difference| to the
/// candidate, with that metric value.
std::pair<SignedSolution, double> nearest_solution(const Circle& candidate,
                                                   const SolutionSet& set);

}  // namespace apo
