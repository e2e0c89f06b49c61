#pragma once

#include <string>

#include "apo/construction.hpp"
#include "apo/oracle.hpp"

namespace apo {

struct RenderLayers {
    bool scene = true;
    bool equal_circles = true;
    bool loci = true;
    bool inverted = true;
    bool candidate = true;
    bool oracle = true;
    bool labels = true;

    bool any() const {
        return scene || equal_circles || loci || inverted || candidate || oracle || labels;
    }
    static RenderLayers none() { return RenderLayers{false, false, false, false, false, false, false}; }
};

struct RenderOptions {
    int width_px = 1000;
    int height_px = 1000;
    double margin_fraction = 0.05;  // in [0, 0.4]
    RenderLayers layers;
};

struct SvgDocument {
    std::string text;
};

/// Deterministic SVG 1.1 rendering: fixed layer order and group ids, trace
/// order within layers, every coordinate printed with exactly six decimals
/// (negative zero normalized). Same inputs give identical bytes.
SvgDocument render(const Scene& scene, const PipelineResult* result, const SolutionSet* oracle,
                   const RenderOptions& opts = {});

}  // namespace apo
