#include "apo/report_io.hpp"

namespace apo {

namespace {

double require_number(const Json& node, const char* key) {
    if (!node.contains(key) || !node[key].is_number())
        fail(Errc::invalid_argument, std::string("scene file: missing number \"") + key + "\"");
    return node[key].get<double>();
}

Json point_json(Point2 p) { return Json{{"x", p.x}, {"y", p.y}}; }

Json circle_json(const Circle& c) {
    return Json{{"cx", c.center.x}, {"cy", c.center.y}, {"r", c.radius}};
}

Json line_json(const Line2& l) {
    return Json{{"nx", l.normal.x}, {"ny", l.normal.y}, {"offset", l.offset}};
}

}  // namespace

SceneFile parse_scene_file(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::invalid_argument, std::string("scene file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("circles") || !doc["circles"].is_array())
        fail(Errc::invalid_argument, "scene file needs a \"circles\" array");
    const Json& arr = doc["circles"];
    if (arr.size() != 3)
        fail(Errc::invalid_argument, "scene file needs exactly three circles");

    SceneFile out;
    for (std::size_t i = 0; i < 3; ++i) {
        const Json& node = arr[i];
        if (!node.is_object())
            fail(Errc::invalid_argument, "each circle must be an object {cx, cy, r}");
        const double cx = require_number(node, "cx");
        const double cy = require_number(node, "cy");
        const double r = require_number(node, "r");
        if (!(r > 0.0)) fail(Errc::invalid_argument, "circle radius must be positive");
        out.circles[i] = Circle{{cx, cy}, r};
    }
    if (doc.contains("m_squared")) out.m_squared = require_number(doc, "m_squared");
    if (doc.contains("k_squared")) out.k_squared = require_number(doc, "k_squared");
    if (doc.contains("eps_rel")) out.eps_rel = require_number(doc, "eps_rel");
    if (doc.contains("tangent_variant")) {
        if (!doc["tangent_variant"].is_string())
            fail(Errc::invalid_argument, "tangent_variant must be a string");
        const auto v = tangent_variant_from_name(doc["tangent_variant"].get<std::string>());
        if (!v)
            fail(Errc::invalid_argument,
                 "tangent_variant must be \"outer_tangent\" or \"enclosing\"");
        out.variant = v;
    }
    return out;
}

Json scene_json(const Scene& scene) {
    Json arr = Json::array();
    for (const Circle& c : scene.circles()) arr.push_back(circle_json(c));
    return Json{{"circles", arr}};
}

Json solutions_json(const SolutionSet& set) {
    Json arr = Json::array();
    for (const SignedSolution& s : set.solutions) {
        Json node = circle_json(s.circle);
        node["signs"] = s.signs;
        node["residual"] = s.residual;
        arr.push_back(std::move(node));
    }
    return arr;
}

Json generalized_json(const GeneralizedCircle& g) {
    if (g.is_circle()) {
        return Json{{"type", "circle"},
                    {"cx", g.circle().center.x},
                    {"cy", g.circle().center.y},
                    {"r", g.circle().radius}};
    }
    return Json{{"type", "line"},
                {"nx", g.line().normal.x},
                {"ny", g.line().normal.y},
                {"offset", g.line().offset}};
}

Json construct_json(const PipelineResult& result) {
    const ResidualReport& res = result.residuals;
    Json out{{"a", point_json(result.reflection_center)},
             {"m_squared", result.m_squared},
             {"shrink_radius", result.shrink_radius},
             {"k2", result.k2},
             {"kp2", result.kp2},
             {"variant", tangent_variant_name(result.variant)},
             {"degenerate_loci", result.degenerate_loci}};
    Json lines = Json::array();
    for (const Line2& l : result.locus_lines) lines.push_back(line_json(l));
    out["locus_lines"] = std::move(lines);
    Json equals = Json::array();
    for (const Circle& c : result.equal_circles) equals.push_back(circle_json(c));
    out["equal_circles"] = std::move(equals);
    out["c4"] = generalized_json(result.c4);
    Json inverted = Json::array();
    for (const GeneralizedCircle& g : result.inverted_equal)
        inverted.push_back(generalized_json(g));
    out["inverted_equal"] = std::move(inverted);
    out["c4p"] = generalized_json(result.c4p);
    out["c4pp"] = generalized_json(result.c4pp);
    out["residuals"] = Json{{"power_ratio_dev", res.power_ratio_dev},
                            {"concurrency_dev", res.concurrency_dev},
                            {"c4_tangency", res.c4_tangency},
                            {"c4p_tangency", res.c4p_tangency},
                            {"second_inversion_dev", res.second_inversion_dev},
                            {"final_tangency", res.final_tangency}};
    if (result.scan) out["scan"] = scan_json(*result.scan);
    return out;
}

Json trace_json(const ConstructionTrace& trace) {
    Json arr = Json::array();
    for (const TraceStep& s : trace.steps) {
        Json node{{"id", s.id}, {"stage", s.stage}, {"kind", step_kind_name(s.kind)}};
        if (!s.label.empty()) node["label"] = s.label;
        switch (s.kind) {
            case StepKind::point:
            case StepKind::label: node["geometry"] = point_json(std::get<Point2>(s.geometry)); break;
            case StepKind::segment: {
                const Segment& seg = std::get<Segment>(s.geometry);
                node["geometry"] = Json{{"a", point_json(seg.a)}, {"b", point_json(seg.b)}};
                break;
            }
            case StepKind::line: node["geometry"] = line_json(std::get<Line2>(s.geometry)); break;
            case StepKind::circle:
                node["geometry"] = circle_json(std::get<Circle>(s.geometry));
                break;
            case StepKind::arc: {
                const Arc& a = std::get<Arc>(s.geometry);
                node["geometry"] = Json{{"center", point_json(a.center)},
                                        {"radius", a.radius},
                                        {"start_angle", a.start_angle},
                                        {"end_angle", a.end_angle}};
                break;
            }
        }
        arr.push_back(std::move(node));
    }
    return arr;
}

Json scan_json(const FeasibilityScan& scan) {
    Json probes = Json::array();
    for (const ScanProbe& p : scan.probes) {
        Json node{{"m_squared", p.m_squared}, {"feasible", p.feasible}, {"r_squared", p.r_squared}};
        if (!p.reason.empty()) node["reason"] = p.reason;
        probes.push_back(std::move(node));
    }
    Json out{{"requested", scan.requested}, {"probes", std::move(probes)}};
    if (scan.boundary) out["boundary"] = *scan.boundary;
    return out;
}

Json report_header(const Scene& scene) {
    return Json{{"schema_version", "1"}, {"scene", scene_json(scene)}};
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace apo
