#include "pathguide/lights.hpp"

#include <algorithm>
#include <vector>

#include "pathguide/errors.hpp"

namespace pathguide {

const char* to_string(LightClass c) {
    switch (c) {
        case LightClass::pedestrian_red: return "pedestrian_red";
        case LightClass::pedestrian_green: return "pedestrian_green";
        case LightClass::vehicle_red: return "vehicle_red";
        case LightClass::vehicle_green: return "vehicle_green";
        case LightClass::others: return "others";
    }
    return "?";
}

std::optional<LightClass> light_class_from_string(const std::string& s) {
    if (s == "pedestrian_red") return LightClass::pedestrian_red;
    if (s == "pedestrian_green") return LightClass::pedestrian_green;
    if (s == "vehicle_red") return LightClass::vehicle_red;
    if (s == "vehicle_green") return LightClass::vehicle_green;
    if (s == "others") return LightClass::others;
    return std::nullopt;
}

const char* to_string(VerdictColor c) {
    switch (c) {
        case VerdictColor::none: return "none";
        case VerdictColor::red: return "red";
        case VerdictColor::green: return "green";
    }
    return "?";
}

std::vector<LightPatch> extract_patches(const SegmentationFrame& frame) {
    const BoolGrid lights = traffic_light_mask(frame);
    const int w = lights.width;
    const int h = lights.height;

    std::vector<std::uint8_t> visited(lights.cells.size(), 0);
    std::vector<std::int32_t> stack;
    std::vector<LightPatch> patches;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t start = lights.index(x, y);
            if (!lights.cells[start] || visited[start]) continue;
            LightPatch patch{x, y, x, y, 0};
            visited[start] = 1;
            stack.push_back(static_cast<std::int32_t>(start));
            while (!stack.empty()) {
                const std::int32_t idx = stack.back();
                stack.pop_back();
                ++patch.pixel_count;
                const int cx = idx % w;
                const int cy = idx / w;
                patch.x_min = std::min(patch.x_min, cx);
                patch.x_max = std::max(patch.x_max, cx);
                patch.y_min = std::min(patch.y_min, cy);
                patch.y_max = std::max(patch.y_max, cy);
                for (int dy = -1; dy <= 1; ++dy) {
                    const int ny = cy + dy;
                    if (ny < 0 || ny >= h) continue;
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx;
                        if (nx < 0 || nx >= w) continue;
                        const std::size_t nidx = lights.index(nx, ny);
                        if (lights.cells[nidx] && !visited[nidx]) {
                            visited[nidx] = 1;
                            stack.push_back(static_cast<std::int32_t>(nidx));
                        }
                    }
                }
            }
            if (patch.width() >= kMinPatchSide && patch.height() >= kMinPatchSide) {
                patches.push_back(patch);
            }
        }
    }

    std::stable_sort(patches.begin(), patches.end(), [](const LightPatch& a, const LightPatch& b) {
        if (a.pixel_count != b.pixel_count) return a.pixel_count > b.pixel_count;
        if (a.y_min != b.y_min) return a.y_min < b.y_min;
        return a.x_min < b.x_min;
    });
    return patches;
}

RgbImage crop_patch(const RgbImage& image, const LightPatch& patch) {
    RgbImage out(patch.width(), patch.height());
    for (int y = 0; y < out.height; ++y) {
        const std::uint8_t* src = image.at(patch.x_min, patch.y_min + y);
        std::uint8_t* dst = out.at(0, y);
        std::copy(src, src + static_cast<std::size_t>(3) * out.width, dst);
    }
    return out;
}

LightClass classify_patch(LightClassifier& classifier, const RgbImage& patch,
                          const LightPatch& bbox) {
    if (patch.width < kMinPatchSide || patch.height < kMinPatchSide) {
        throw InvalidInput("classify_patch: patch below the 8x8 floor");
    }
    return classifier.classify(patch, bbox);
}

namespace {

VerdictColor majority_color(const std::deque<LightClass>& buffer) {
    if (buffer.empty()) return VerdictColor::none;
    int reds = 0, greens = 0;
    for (LightClass c : buffer) {
        if (c == LightClass::pedestrian_red) ++reds;
        if (c == LightClass::pedestrian_green) ++greens;
    }
    // Tie resolves to red.
    return greens > reds ? VerdictColor::green : VerdictColor::red;
}

}  // namespace

LightVerdict update_verdict(LightVerdict verdict, LightClass prediction) {
    if (is_pedestrian(prediction)) {
        verdict.buffer.push_back(prediction);
        while (verdict.buffer.size() > kVerdictWindow) verdict.buffer.pop_front();
    }
    verdict.color = majority_color(verdict.buffer);
    return verdict;
}

LightVerdict reset_verdict(LightVerdict verdict) {
    verdict.buffer.clear();
    verdict.color = VerdictColor::none;
    return verdict;
}

LightTracker::LightTracker(int reset_after_frames) : reset_after_frames_(reset_after_frames) {}

const LightVerdict& LightTracker::observe(std::optional<LightClass> prediction) {
    if (prediction) {
        frames_without_light_ = 0;
        verdict_ = update_verdict(std::move(verdict_), *prediction);
    } else {
        ++frames_without_light_;
        if (frames_without_light_ >= reset_after_frames_ && !verdict_.buffer.empty()) {
            verdict_ = reset_verdict(std::move(verdict_));
        }
    }
    return verdict_;
}

void LightTracker::reset() {
    verdict_ = reset_verdict(std::move(verdict_));
    frames_without_light_ = 0;
}

}  // namespace pathguide
