#pragma once

#include <optional>

#include "pathguide/image.hpp"
#include "pathguide/palette.hpp"

namespace pathguide {

struct PixelCentroid {
    double x = 0.0;
    double y = 0.0;
};

struct ComponentResult {
    BoolGrid mask;
    int pixel_count = 0;
    bool present = false;
};

// Largest 8-connected component of true cells. Ties go to the component whose
// first pixel in row-major order comes earliest.
ComponentResult largest_component(const BoolGrid& walkable);

// Image-moment centroid: (M10/M00, M01/M00) over integer pixel coordinates.
// Throws EmptyRegion when the mask has no true cell.
PixelCentroid estimate_centroid(const BoolGrid& component);

struct BandConfidences {
    double left = 0.0;
    double middle = 0.0;
    double right = 0.0;
};

// Splits the image into three vertical bands of widths floor(W/3), floor(W/3),
// W - 2*floor(W/3) and returns the mean mask value per band. Requires W >= 3.
BandConfidences partition_confidences(const BoolGrid& component);

// 1 iff conf >= theta. Both arguments must lie in [0, 1].
int binary_conversion(double conf, double theta_conf);

struct CodeTriple {
    int left = 0;
    int middle = 0;
    int right = 0;

    bool operator==(const CodeTriple&) const = default;
    // Index into an 8-entry lookup table, left bit most significant.
    int index() const { return left * 4 + middle * 2 + right; }
};

struct WalkableAnalysis {
    BoolGrid component_mask;
    int pixel_count = 0;
    bool present = false;
    std::optional<PixelCentroid> centroid;
    BandConfidences confidences;
    CodeTriple codes;
};

// Full per-frame walkable-path analysis: walkable mask -> largest component ->
// centroid -> band confidences -> binary codes. Confidences are computed over
// the largest-component mask, not the raw walkable mask.
WalkableAnalysis analyze(const SegmentationFrame& frame, double theta_conf);

}  // namespace pathguide
