#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apo/report_io.hpp"
#include "apo/svg_render.hpp"

namespace {

// Exit codes: 0 success, 2 invalid input, 3 infeasible construction,
// 4 degenerate geometry, 5 unwritable output.
constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitUnwritable = 5;

int exit_code_for(apo::Errc code) {
    switch (code) {
        case apo::Errc::infeasible_shrink:
        case apo::Errc::no_feasible_m2:
        case apo::Errc::tangent_radius_nonpositive:
            return kExitInfeasible;
        case apo::Errc::invalid_argument:
        case apo::Errc::empty_render:
            return kExitInvalidInput;
        case apo::Errc::io_failure:
            return kExitUnwritable;
        default:
            return kExitDegenerate;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) apo::fail(apo::Errc::invalid_argument, "cannot read input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) apo::fail(apo::Errc::io_failure, "cannot open output file " + path);
    out << text;
    out.flush();
    if (!out) apo::fail(apo::Errc::io_failure, "cannot write output file " + path);
}

void emit_report(const apo::Json& report, const std::optional<std::string>& json_path) {
    const std::string text = apo::dump_report(report);
    if (json_path)
        write_file(*json_path, text);
    else
        std::cout << text;
}

struct CommonArgs {
    std::string input;
    std::optional<double> m2;
    std::optional<double> k2;
    std::optional<std::string> variant;
    std::optional<double> tol;
    bool no_scan = false;
    std::optional<std::string> json_path;
    std::optional<std::string> svg_path;
    std::string layers = "scene";
    std::optional<std::string> out_path;
};

struct LoadedScene {
    apo::Scene scene;
    apo::PipelineConfig config;
};

LoadedScene load_scene(const CommonArgs& args) {
    const apo::SceneFile file = apo::parse_scene_file(read_file(args.input));

    apo::PipelineConfig config;
    if (file.m_squared) config.m_squared = *file.m_squared;
    if (file.k_squared) config.k_squared = file.k_squared;
    if (file.variant) config.variant = *file.variant;
    if (file.eps_rel) config.eps_rel = file.eps_rel;

    if (args.m2) config.m_squared = *args.m2;
    if (args.k2) config.k_squared = args.k2;
    if (args.variant) {
        const auto v = apo::tangent_variant_from_name(*args.variant);
        if (!v)
            apo::fail(apo::Errc::invalid_argument,
                      "--variant must be outer_tangent or enclosing");
        config.variant = *v;
    }
    if (args.tol) config.eps_rel = args.tol;
    config.feasibility_scan = !args.no_scan;

    const double eps_rel = config.eps_rel.value_or(1e-9);
    return LoadedScene{apo::Scene::validate(file.circles, eps_rel), config};
}

int cmd_solve(const CommonArgs& args) {
    const LoadedScene loaded = load_scene(args);
    const apo::SolutionSet set = apo::solve_ccc(loaded.scene);
    apo::Json report = apo::report_header(loaded.scene);
    report["solutions"] = apo::solutions_json(set);
    emit_report(report, args.json_path);
    return kExitOk;
}

int cmd_construct(const CommonArgs& args) {
    const LoadedScene loaded = load_scene(args);
    apo::Json report = apo::report_header(loaded.scene);
    try {
        const apo::PipelineResult result = apo::run_pipeline(loaded.scene, loaded.config);
        report["construct"] = apo::construct_json(result);
        report["trace"] = apo::trace_json(result.trace);
        emit_report(report, args.json_path);
        if (args.svg_path) {
            const apo::SvgDocument doc = apo::render(loaded.scene, &result, nullptr, {});
            write_file(*args.svg_path, doc.text);
        }
        return kExitOk;
    } catch (const apo::NoFeasibleM2Error& e) {
        report["infeasible"] =
            apo::Json{{"error", e.what()}, {"scan", apo::scan_json(e.scan())}};
        emit_report(report, args.json_path);
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const apo::Error& e) {
        const int code = exit_code_for(e.code());
        if (code != kExitInfeasible) throw;
        report["infeasible"] = apo::Json{{"error", e.what()}};
        emit_report(report, args.json_path);
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    }
}

int cmd_compare(const CommonArgs& args) {
    const LoadedScene loaded = load_scene(args);
    const apo::SolutionSet set = apo::solve_ccc(loaded.scene);

    apo::Json report = apo::report_header(loaded.scene);
    report["solutions"] = apo::solutions_json(set);

    apo::Json variants = apo::Json::object();
    int ran = 0;
    for (const apo::TangentVariant variant :
         {apo::TangentVariant::outer_tangent, apo::TangentVariant::enclosing}) {
        apo::PipelineConfig config = loaded.config;
        config.variant = variant;
        apo::Json entry;
        try {
            const apo::PipelineResult result = apo::run_pipeline(loaded.scene, config);
            entry["status"] = "ok";
            entry["c4pp"] = apo::generalized_json(result.c4pp);
            entry["final_tangency"] = result.residuals.final_tangency;
            if (result.c4pp.is_circle() && !set.solutions.empty()) {
                const auto [nearest, metric] =
                    apo::nearest_solution(result.c4pp.circle(), set);
                apo::Json nearest_arr = apo::solutions_json(
                    apo::SolutionSet{{nearest}, set.scene_scale, set.tolerance});
                entry["nearest"] = nearest_arr[0];
                entry["nearest_metric"] = metric;
            } else {
                entry["nearest"] = nullptr;
                entry["nearest_metric"] = nullptr;
            }
            ++ran;
        } catch (const apo::Error& e) {
            if (exit_code_for(e.code()) != kExitInfeasible) throw;
            entry["status"] = std::string("infeasible: ") + e.what();
        }
        variants[apo::tangent_variant_name(variant)] = std::move(entry);
    }
    if (ran == 0)
        apo::fail(apo::Errc::no_feasible_m2, "construction infeasible for both variants");

    report["compare"] = apo::Json{{"variants", std::move(variants)}};
    emit_report(report, args.json_path);
    return kExitOk;
}

apo::RenderLayers parse_layers(const std::string& list) {
    apo::RenderLayers layers = apo::RenderLayers::none();
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "scene") layers.scene = true;
        else if (item == "equal_circles") layers.equal_circles = true;
        else if (item == "loci") layers.loci = true;
        else if (item == "inverted") layers.inverted = true;
        else if (item == "candidate") layers.candidate = true;
        else if (item == "oracle") layers.oracle = true;
        else if (item == "labels") layers.labels = true;
        else if (item == "all") layers = apo::RenderLayers{};
        else
            apo::fail(apo::Errc::invalid_argument, "unknown render layer \"" + item + "\"");
    }
    return layers;
}

int cmd_render(const CommonArgs& args) {
    const LoadedScene loaded = load_scene(args);
    if (!args.out_path)
        apo::fail(apo::Errc::invalid_argument, "render needs --out PATH");

    apo::RenderOptions opts;
    opts.layers = parse_layers(args.layers);

    std::optional<apo::PipelineResult> result;
    if (opts.layers.equal_circles || opts.layers.loci || opts.layers.inverted ||
        opts.layers.candidate)
        result = apo::run_pipeline(loaded.scene, loaded.config);
    std::optional<apo::SolutionSet> oracle;
    if (opts.layers.oracle) oracle = apo::solve_ccc(loaded.scene);

    const apo::SvgDocument doc =
        apo::render(loaded.scene, result ? &*result : nullptr, oracle ? &*oracle : nullptr, opts);
    write_file(*args.out_path, doc.text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-circle tangency workbench: exact solver, inversive "
                 "construction, SVG diagrams"};
    app.require_subcommand(1);

    CommonArgs args;
    const auto add_common = [&](CLI::App* cmd, bool construction_opts) {
        cmd->add_option("input", args.input, "scene JSON file")->required();
        cmd->add_option("--tol", args.tol, "relative tolerance override (eps_rel)");
        cmd->add_option("--json", args.json_path, "write the JSON report here");
        if (construction_opts) {
            cmd->add_option("--m2", args.m2, "power ratio m^2 in (0,1)");
            cmd->add_option("--k2", args.k2, "first inversion power k^2");
            cmd->add_option("--variant", args.variant, "outer_tangent | enclosing");
            cmd->add_flag("--no-scan", args.no_scan, "fail instead of scanning m^2");
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "enumerate all tangent circles");
    add_common(solve, false);
    CLI::App* construct = app.add_subcommand("construct", "run the inversive construction");
    add_common(construct, true);
    construct->add_option("--svg", args.svg_path, "also render the construction to SVG");
    CLI::App* compare =
        app.add_subcommand("compare", "run solver and construction, report both");
    add_common(compare, true);
    CLI::App* render = app.add_subcommand("render", "render the scene to SVG");
    add_common(render, false);
    render->add_option("--layers", args.layers,
                       "comma list: scene,equal_circles,loci,inverted,candidate,oracle,labels,all");
    render->add_option("--out", args.out_path, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(args);
        if (construct->parsed()) return cmd_construct(args);
        if (compare->parsed()) return cmd_compare(args);
        if (render->parsed()) return cmd_render(args);
        return kExitInvalidInput;
    } catch (const apo::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}
