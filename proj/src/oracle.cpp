#include "apo/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace apo {

namespace {

// Difference of tangency equations (1,i):
//   A_i x + B_i y + C_i r = D_i
// with w_i = s_i * r_i the signed radius.
struct LinearRow {
    double a, b, c, d;
};

LinearRow difference_row(const Circle& c1, double w1, const Circle& ci, double wi) {
    return LinearRow{2.0 * (ci.center.x - c1.center.x), 2.0 * (ci.center.y - c1.center.y),
                     2.0 * (wi - w1),
                     (norm2(ci.center) - wi * wi) - (norm2(c1.center) - w1 * w1)};
}

int solve_quadratic(double alpha, double beta, double gamma, std::array<double, 2>& roots) {
    if (alpha == 0.0) {
        if (beta == 0.0) return 0;
        roots[0] = -gamma / beta;
        return 1;
    }
    double disc = beta * beta - 4.0 * alpha * gamma;
    // Flush the tangency-limit case where roundoff drives a touching double
    // root slightly negative.
    if (disc < 0.0 && disc > -1e-12 * (beta * beta + std::abs(4.0 * alpha * gamma)))
        disc = 0.0;
    if (disc < 0.0) return 0;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (beta + std::copysign(sq, beta));
    if (q == 0.0) {
        roots[0] = 0.0;
        return 1;
    }
    roots[0] = q / alpha;
    roots[1] = gamma / q;
    return 2;
}

double candidate_residual(const Scene& scene, const Circle& cand,
                          const std::array<int, 3>& signs) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Circle& c = scene.circle(i + 1);
        const double d = distance(cand.center, c.center);
        const double target = std::abs(cand.radius + signs[static_cast<std::size_t>(i)] * c.radius);
        worst = std::max(worst, std::abs(d - target));
    }
    return worst;
}

class SolutionCollector {
public:
    SolutionCollector(const Scene& scene, double dedup_tol)
        : scene_(scene), dedup_tol_(dedup_tol) {}

    void offer(double x, double y, double r, const std::array<int, 3>& signs) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(r)) return;
        if (r <= scene_.tolerance().linear()) return;  // point circles are out of scope
        const Circle cand{{x, y}, r};
        const double residual = candidate_residual(scene_, cand, signs);
        if (residual > scene_.tolerance().linear()) return;

        for (SignedSolution& existing : solutions_) {
            if (distance(existing.circle.center, cand.center) < dedup_tol_ &&
                std::abs(existing.circle.radius - cand.radius) < dedup_tol_) {
                if (residual < existing.residual)
                    existing = SignedSolution{cand, signs, residual};
                return;
            }
        }
        solutions_.push_back(SignedSolution{cand, signs, residual});
    }

    std::vector<SignedSolution> take() {
        std::sort(solutions_.begin(), solutions_.end(),
                  [](const SignedSolution& a, const SignedSolution& b) {
                      if (a.circle.radius != b.circle.radius)
                          return a.circle.radius < b.circle.radius;
                      if (a.circle.center.x != b.circle.center.x)
                          return a.circle.center.x < b.circle.center.x;
                      return a.circle.center.y < b.circle.center.y;
                  });
        return std::move(solutions_);
    }

private:
    const Scene& scene_;
    double dedup_tol_;
    std::vector<SignedSolution> solutions_;
};

// Solves one sign case. The generic path expresses (x, y) affinely in r and
// substitutes into the first tangency equation. With collinear centers that
// 2x2 block is singular no matter how the pairs are chosen, so the fallback
// eliminates (x, r) as affine functions of y (or (y, r) in x), where the
// radius column keeps the system regular.
void solve_sign_case(const Scene& scene, const std::array<int, 3>& signs,
                     SolutionCollector& out) {
    const Circle& c1 = scene.circle(1);
    const Circle& c2 = scene.circle(2);
    const Circle& c3 = scene.circle(3);
    const double w1 = signs[0] * c1.radius;
    const double w2 = signs[1] * c2.radius;
    const double w3 = signs[2] * c3.radius;

    const LinearRow r2 = difference_row(c1, w1, c2, w2);
    const LinearRow r3 = difference_row(c1, w1, c3, w3);
    const double eps = scene.tolerance().eps();

    const auto row_norm_xy = [](const LinearRow& r) { return std::hypot(r.a, r.b); };
    const auto row_norm_xr = [](const LinearRow& r) { return std::hypot(r.a, r.c); };
    const auto row_norm_yr = [](const LinearRow& r) { return std::hypot(r.b, r.c); };

    const double det_xy = r2.a * r3.b - r3.a * r2.b;
    if (std::abs(det_xy) > eps * row_norm_xy(r2) * row_norm_xy(r3)) {
        // x = x0 + x1 r, y = y0 + y1 r
        const double x0 = (r2.d * r3.b - r3.d * r2.b) / det_xy;
        const double x1 = (r3.c * r2.b - r2.c * r3.b) / det_xy;
        const double y0 = (r2.a * r3.d - r3.a * r2.d) / det_xy;
        const double y1 = (r3.a * r2.c - r2.a * r3.c) / det_xy;
        const double ex = x0 - c1.center.x;
        const double ey = y0 - c1.center.y;
        std::array<double, 2> roots{};
        const int n = solve_quadratic(x1 * x1 + y1 * y1 - 1.0,
                                      2.0 * (ex * x1 + ey * y1 - w1),
                                      ex * ex + ey * ey - w1 * w1, roots);
        for (int k = 0; k < n; ++k)
            out.offer(x0 + x1 * roots[static_cast<std::size_t>(k)],
                      y0 + y1 * roots[static_cast<std::size_t>(k)],
                      roots[static_cast<std::size_t>(k)], signs);
        return;
    }

    const double det_xr = r2.a * r3.c - r3.a * r2.c;
    const double det_yr = r2.b * r3.c - r3.b * r2.c;
    const bool use_xr = std::abs(det_xr) * row_norm_yr(r2) * row_norm_yr(r3) >=
                        std::abs(det_yr) * row_norm_xr(r2) * row_norm_xr(r3);
    if (use_xr && std::abs(det_xr) > eps * row_norm_xr(r2) * row_norm_xr(r3)) {
        // x = x0 + x1 y, r = rr0 + rr1 y; quadratic in y
        const double x0 = (r2.d * r3.c - r3.d * r2.c) / det_xr;
        const double x1 = (r3.b * r2.c - r2.b * r3.c) / det_xr;
        const double rr0 = (r2.a * r3.d - r3.a * r2.d) / det_xr;
        const double rr1 = (r3.a * r2.b - r2.a * r3.b) / det_xr;
        const double ex = x0 - c1.center.x;
        const double rw = rr0 + w1;
        std::array<double, 2> roots{};
        const int n = solve_quadratic(x1 * x1 + 1.0 - rr1 * rr1,
                                      2.0 * (ex * x1 - c1.center.y - rr1 * rw),
                                      ex * ex + c1.center.y * c1.center.y - rw * rw, roots);
        for (int k = 0; k < n; ++k) {
            const double y = roots[static_cast<std::size_t>(k)];
            out.offer(x0 + x1 * y, y, rr0 + rr1 * y, signs);
        }
        return;
    }
    if (std::abs(det_yr) > eps * row_norm_yr(r2) * row_norm_yr(r3)) {
        // y = y0 + y1 x, r = rr0 + rr1 x; quadratic in x
        const double y0 = (r2.d * r3.c - r3.d * r2.c) / det_yr;
        const double y1 = (r3.a * r2.c - r2.a * r3.c) / det_yr;
        const double rr0 = (r2.b * r3.d - r3.b * r2.d) / det_yr;
        const double rr1 = (r3.b * r2.a - r2.b * r3.a) / det_yr;
        const double ey = y0 - c1.center.y;
        const double rw = rr0 + w1;
        std::array<double, 2> roots{};
        const int n = solve_quadratic(1.0 + y1 * y1 - rr1 * rr1,
                                      2.0 * (ey * y1 - c1.center.x - rr1 * rw),
                                      ey * ey + c1.center.x * c1.center.x - rw * rw, roots);
        for (int k = 0; k < n; ++k) {
            const double x = roots[static_cast<std::size_t>(k)];
            out.offer(x, y0 + y1 * x, rr0 + rr1 * x, signs);
        }
        return;
    }
    // Rows proportional in every elimination: this sign case has no isolated
    // solution (inconsistent, or a continuum only possible for inputs that
    // validate_scene rejects). Skip it.
}

}  // namespace

SolutionSet solve_ccc(const Scene& scene) {
    const double scale = scene.tolerance().scale;
    SolutionCollector collector(scene, 1e-7 * scale);
    for (int s1 : {1, -1})
        for (int s2 : {1, -1})
            for (int s3 : {1, -1}) solve_sign_case(scene, {s1, s2, s3}, collector);
    return SolutionSet{collector.take(), scale, scene.tolerance().linear()};
}

std::array<TangencyClass, 3> verify_candidate(const GeneralizedCircle& candidate,
                                              const Scene& scene) {
    std::array<TangencyClass, 3> out;
    for (int i = 0; i < 3; ++i)
        out[static_cast<std::size_t>(i)] =
            tangency_classify(candidate, scene.circle(i + 1), scene.tolerance());
    return out;
}

std::pair<SignedSolution, double> nearest_solution(const Circle& candidate,
                                                   const SolutionSet& set) {
    if (set.solutions.empty())
        fail(Errc::empty_solution_set, "nearest_solution over an empty solution set");
    const SignedSolution* best = nullptr;
    double best_metric = 0.0;
    for (const SignedSolution& s : set.solutions) {
        const double metric = distance(s.circle.center, candidate.center) +
                              std::abs(s.circle.radius - candidate.radius);
        if (!best || metric < best_metric) {
            best = &s;
            best_metric = metric;
        }
    }
    return {*best, best_metric};
}

}  // namespace apo
