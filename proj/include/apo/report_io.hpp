#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "apo/construction.hpp"
#include "apo/oracle.hpp"

namespace apo {

/// Keys keep insertion order so reports re-serialize byte-identically.
using Json = nlohmann::ordered_json;

/// Parsed scene file: exactly three circles plus optional construction
/// parameters, all overridable from the command line.
struct SceneFile {
    std::array<Circle, 3> circles;
    std::optional<double> m_squared;
    std::optional<double> k_squared;
    std::optional<TangentVariant> variant;
    std::optional<double> eps_rel;
};

/// Throws Error(InvalidArgument) on malformed JSON or schema violations.
SceneFile parse_scene_file(const std::string& text);

Json scene_json(const Scene& scene);
Json solutions_json(const SolutionSet& set);
Json generalized_json(const GeneralizedCircle& g);
Json construct_json(const PipelineResult& result);
Json trace_json(const ConstructionTrace& trace);
Json scan_json(const FeasibilityScan& scan);

/// Report skeleton: {"schema_version": "1", "scene": ...}.
Json report_header(const Scene& scene);

/// Two-space indented dump with a trailing newline; numbers in shortest
/// round-trip form.
std::string dump_report(const Json& report);

}  // namespace apo
