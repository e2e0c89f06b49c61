#include "apo/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace apo {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string escape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Box {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void include(Point2 p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    void include(const Circle& c) {
        include(c.center + Vec2{c.radius, c.radius});
        include(c.center - Vec2{c.radius, c.radius});
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }
};

// Which layer a trace step belongs to, by construction stage.
enum class Layer { scene, equal_circles, loci, inverted, candidate, oracle };

Layer layer_of_stage(const std::string& stage) {
    if (stage == "4.1") return Layer::equal_circles;
    if (stage == "4.5" || stage == "3.1.8" || stage == "4.10") return Layer::candidate;
    if (stage == "4.7" || stage == "4.8" || stage == "4.9") return Layer::inverted;
    return Layer::loci;  // 4.2, 4.3, 4.4, 4.6
}

bool layer_enabled(const RenderLayers& layers, Layer layer) {
    switch (layer) {
        case Layer::scene: return layers.scene;
        case Layer::equal_circles: return layers.equal_circles;
        case Layer::loci: return layers.loci;
        case Layer::inverted: return layers.inverted;
        case Layer::candidate: return layers.candidate;
        case Layer::oracle: return layers.oracle;
    }
    return false;
}

struct LayerStyle {
    const char* id;
    const char* stroke;
};

// World y grows upward, SVG y downward; emit with y negated.
class SvgWriter {
public:
    SvgWriter(std::string& out, const Box& view, double stroke_width, double point_radius,
              double font_size)
        : out_(out), view_(view), stroke_width_(stroke_width), point_radius_(point_radius),
          font_size_(font_size) {}

    void open_group(const LayerStyle& style) {
        out_ += "<g id=\"";
        out_ += style.id;
        out_ += "\" fill=\"none\" stroke=\"";
        out_ += style.stroke;
        out_ += "\" stroke-width=\"" + fmt(stroke_width_) + "\">\n";
    }
    void close_group() { out_ += "</g>\n"; }

    void circle(const Circle& c) {
        out_ += "<circle cx=\"" + fmt(c.center.x) + "\" cy=\"" + fmt(-c.center.y) + "\" r=\"" +
                fmt(c.radius) + "\"/>\n";
    }

    void point(Point2 p) {
        out_ += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(-p.y) + "\" r=\"" +
                fmt(point_radius_) + "\" fill=\"currentColor\"/>\n";
    }

    void segment(Point2 a, Point2 b) {
        out_ += "<line x1=\"" + fmt(a.x) + "\" y1=\"" + fmt(-a.y) + "\" x2=\"" + fmt(b.x) +
                "\" y2=\"" + fmt(-b.y) + "\"/>\n";
    }

    // Infinite line clipped to the view box; skipped entirely when outside.
    void line(const Line2& l) {
        const Point2 p0 = l.offset * l.normal;
        const Vec2 dir = perp(l.normal);
        double t0 = -std::numeric_limits<double>::infinity();
        double t1 = std::numeric_limits<double>::infinity();
        if (!clip_axis(p0.x, dir.x, view_.min_x, view_.max_x, t0, t1)) return;
        if (!clip_axis(p0.y, dir.y, view_.min_y, view_.max_y, t0, t1)) return;
        if (!(t0 < t1)) return;
        segment(p0 + t0 * dir, p0 + t1 * dir);
    }

    void arc(const Arc& a) {
        // Rendered as the full-turn fallback; the construction never emits
        // arcs, this keeps the writer total over the step vocabulary.
        circle(Circle{a.center, a.radius});
    }

    void text(Point2 anchor, const std::string& label) {
        out_ += "<text x=\"" + fmt(anchor.x + 1.2 * point_radius_) + "\" y=\"" +
                fmt(-(anchor.y + 1.2 * point_radius_)) + "\" font-size=\"" + fmt(font_size_) +
                "\">" + escape_text(label) + "</text>\n";
    }

private:
    static bool clip_axis(double origin, double d, double lo, double hi, double& t0, double& t1) {
        if (d == 0.0) return origin >= lo && origin <= hi;
        double a = (lo - origin) / d;
        double b = (hi - origin) / d;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        return true;
    }

    std::string& out_;
    const Box& view_;
    double stroke_width_;
    double point_radius_;
    double font_size_;
};

}  // namespace

SvgDocument render(const Scene& scene, const PipelineResult* result, const SolutionSet* oracle,
                   const RenderOptions& opts) {
    if (!opts.layers.any()) fail(Errc::empty_render, "all render layers disabled");
    if (opts.margin_fraction < 0.0 || opts.margin_fraction > 0.4)
        fail(Errc::invalid_argument, "margin_fraction must lie in [0, 0.4]");
    if (opts.width_px <= 0 || opts.height_px <= 0)
        fail(Errc::invalid_argument, "render size must be positive");

    Box box;
    for (const Circle& c : scene.circles()) box.include(c);
    if (result) {
        for (const TraceStep& s : result->trace.steps) {
            switch (s.kind) {
                case StepKind::point:
                case StepKind::label: box.include(std::get<Point2>(s.geometry)); break;
                case StepKind::segment: {
                    const Segment& seg = std::get<Segment>(s.geometry);
                    box.include(seg.a);
                    box.include(seg.b);
                    break;
                }
                case StepKind::circle: box.include(std::get<Circle>(s.geometry)); break;
                case StepKind::arc: {
                    const Arc& a = std::get<Arc>(s.geometry);
                    box.include(Circle{a.center, a.radius});
                    break;
                }
                case StepKind::line: break;  // infinite; clipped later
            }
        }
    }
    if (oracle)
        for (const SignedSolution& s : oracle->solutions) box.include(s.circle);
    if (!box.valid()) box = Box{-1.0, -1.0, 1.0, 1.0};

    const double extent = std::max(box.max_x - box.min_x, box.max_y - box.min_y);
    const double pad = std::max(opts.margin_fraction * extent, 1e-6);
    Box view{box.min_x - pad, box.min_y - pad, box.max_x + pad, box.max_y + pad};

    const double max_dim = std::max(view.max_x - view.min_x, view.max_y - view.min_y);
    const double stroke_width = 0.0015 * max_dim;
    const double point_radius = 0.005 * max_dim;
    const double font_size = 0.02 * max_dim;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(opts.width_px) + "\" height=\"" + std::to_string(opts.height_px) +
           "\" viewBox=\"" + fmt(view.min_x) + " " + fmt(-view.max_y) + " " +
           fmt(view.max_x - view.min_x) + " " + fmt(view.max_y - view.min_y) + "\">\n";

    SvgWriter w(out, view, stroke_width, point_radius, font_size);

    struct Labeled {
        Point2 anchor;
        std::string text;
    };
    std::vector<Labeled> labels;

    const auto anchor_of = [](const TraceStep& s) -> Point2 {
        switch (s.kind) {
            case StepKind::point:
            case StepKind::label: return std::get<Point2>(s.geometry);
            case StepKind::segment: {
                const Segment& seg = std::get<Segment>(s.geometry);
                return midpoint(seg.a, seg.b);
            }
            case StepKind::circle: {
                const Circle& c = std::get<Circle>(s.geometry);
                return c.center + Vec2{c.radius, 0.0};
            }
            case StepKind::arc: {
                const Arc& a = std::get<Arc>(s.geometry);
                return a.center + Vec2{a.radius, 0.0};
            }
            case StepKind::line: break;
        }
        return Point2{};
    };

    const auto draw_step = [&](const TraceStep& s) {
        switch (s.kind) {
            case StepKind::point: w.point(std::get<Point2>(s.geometry)); break;
            case StepKind::segment: {
                const Segment& seg = std::get<Segment>(s.geometry);
                w.segment(seg.a, seg.b);
                break;
            }
            case StepKind::line: w.line(std::get<Line2>(s.geometry)); break;
            case StepKind::circle: w.circle(std::get<Circle>(s.geometry)); break;
            case StepKind::arc: w.arc(std::get<Arc>(s.geometry)); break;
            case StepKind::label: break;  // text only
        }
        if (!s.label.empty()) {
            Point2 anchor;
            if (s.kind == StepKind::line) {
                // Anchor line labels at the foot of the view center.
                const Line2& l = std::get<Line2>(s.geometry);
                anchor = foot_of_perpendicular(
                    Point2{0.5 * (view.min_x + view.max_x), 0.5 * (view.min_y + view.max_y)}, l);
            } else {
                anchor = anchor_of(s);
            }
            labels.push_back(Labeled{anchor, s.label});
        }
    };

    const LayerStyle styles[] = {
        {"scene", "#1f6fb4"},      {"equal_circles", "#7a7a7a"}, {"loci", "#2a9d5c"},
        {"inverted", "#b4741f"},   {"candidate", "#c23b3b"},     {"oracle", "#8052c7"},
    };
    const Layer order[] = {Layer::scene,    Layer::equal_circles, Layer::loci,
                           Layer::inverted, Layer::candidate,     Layer::oracle};

    for (std::size_t li = 0; li < 6; ++li) {
        const Layer layer = order[li];
        if (!layer_enabled(opts.layers, layer)) continue;
        w.open_group(styles[li]);
        if (layer == Layer::scene) {
            for (const Circle& c : scene.circles()) w.circle(c);
        } else if (layer == Layer::oracle) {
            if (oracle)
                for (const SignedSolution& s : oracle->solutions) w.circle(s.circle);
        } else if (result) {
            for (const TraceStep& s : result->trace.steps)
                if (layer_of_stage(s.stage) == layer) draw_step(s);
        }
        w.close_group();
    }

    if (opts.layers.labels) {
        out += "<g id=\"labels\" font-family=\"monospace\" fill=\"#202020\">\n";
        for (const Labeled& l : labels) w.text(l.anchor, l.text);
        out += "</g>\n";
    }

    out += "</svg>\n";
    return SvgDocument{std::move(out)};
}

}  // namespace apo
