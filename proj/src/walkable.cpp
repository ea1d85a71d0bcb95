#include "pathguide/walkable.hpp"

#include <vector>

#include "pathguide/errors.hpp"

namespace pathguide {

ComponentResult largest_component(const BoolGrid& walkable) {
    ComponentResult result;
    result.mask = BoolGrid(walkable.width, walkable.height);
    if (walkable.empty()) return result;

    const int w = walkable.width;
    const int h = walkable.height;
    std::vector<std::int32_t> label(walkable.cells.size(), -1);
    std::vector<std::int32_t> stack;
    std::int32_t best_label = -1;
    int best_count = 0;
    std::int32_t next_label = 0;

    // Row-major scan: the first component reaching the maximal count wins ties,
    // which is exactly the earliest top-left pixel rule.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t start = walkable.index(x, y);
            if (!walkable.cells[start] || label[start] >= 0) continue;
            const std::int32_t cur = next_label++;
            int count = 0;
            label[start] = cur;
            stack.push_back(static_cast<std::int32_t>(start));
            while (!stack.empty()) {
                const std::int32_t idx = stack.back();
                stack.pop_back();
                ++count;
                const int cx = idx % w;
                const int cy = idx / w;
                for (int dy = -1; dy <= 1; ++dy) {
                    const int ny = cy + dy;
                    if (ny < 0 || ny >= h) continue;
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx;
                        if (nx < 0 || nx >= w) continue;
                        const std::size_t nidx = walkable.index(nx, ny);
                        if (walkable.cells[nidx] && label[nidx] < 0) {
                            label[nidx] = cur;
                            stack.push_back(static_cast<std::int32_t>(nidx));
                        }
                    }
                }
            }
            if (count > best_count) {
                best_count = count;
                best_label = cur;
            }
        }
    }

    if (best_label < 0) return result;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] == best_label) result.mask.cells[i] = 1;
    }
    result.pixel_count = best_count;
    result.present = true;
    return result;
}

PixelCentroid estimate_centroid(const BoolGrid& component) {
    double m00 = 0.0, m10 = 0.0, m01 = 0.0;
    for (int y = 0; y < component.height; ++y) {
        const std::uint8_t* row = component.cells.data() + component.index(0, y);
        for (int x = 0; x < component.width; ++x) {
            if (row[x]) {
                m00 += 1.0;
                m10 += x;
                m01 += y;
            }
        }
    }
    if (m00 == 0.0) throw EmptyRegion("estimate_centroid: empty component");
    return {m10 / m00, m01 / m00};
}

BandConfidences partition_confidences(const BoolGrid& component) {
    const int w = component.width;
    const int h = component.height;
    if (w < 3) throw InvalidInput("partition_confidences: width must be >= 3");

    const int band = w / 3;
    // Bands: [0, band), [band, 2*band), [2*band, w) — remainder goes right.
    long long counts[3] = {0, 0, 0};
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = component.cells.data() + component.index(0, y);
        for (int x = 0; x < band; ++x) counts[0] += row[x];
        for (int x = band; x < 2 * band; ++x) counts[1] += row[x];
        for (int x = 2 * band; x < w; ++x) counts[2] += row[x];
    }
    const double area_lm = static_cast<double>(band) * h;
    const double area_r = static_cast<double>(w - 2 * band) * h;
    return {counts[0] / area_lm, counts[1] / area_lm, counts[2] / area_r};
}

int binary_conversion(double conf, double theta_conf) {
    if (!(conf >= 0.0 && conf <= 1.0)) throw InvalidInput("binary_conversion: conf outside [0,1]");
    if (!(theta_conf >= 0.0 && theta_conf <= 1.0))
        throw InvalidInput("binary_conversion: theta_conf outside [0,1]");
    return conf >= theta_conf ? 1 : 0;
}

WalkableAnalysis analyze(const SegmentationFrame& frame, double theta_conf) {
    WalkableAnalysis out;
    ComponentResult comp = largest_component(walkable_mask(frame));
    out.pixel_count = comp.pixel_count;
    out.present = comp.present;
    out.component_mask = std::move(comp.mask);
    if (!out.present) return out;

    out.centroid = estimate_centroid(out.component_mask);
    out.confidences = partition_confidences(out.component_mask);
    out.codes = {binary_conversion(out.confidences.left, theta_conf),
                 binary_conversion(out.confidences.middle, theta_conf),
                 binary_conversion(out.confidences.right, theta_conf)};
    return out;
}

}  // namespace pathguide
