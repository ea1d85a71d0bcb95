#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "pathguide/image.hpp"
#include "pathguide/palette.hpp"

namespace pathguide {

// The five-way traffic light taxonomy used by the patch classifier.
enum class LightClass {
    pedestrian_red,
    pedestrian_green,
    vehicle_red,
    vehicle_green,
    others,
};

const char* to_string(LightClass c);
std::optional<LightClass> light_class_from_string(const std::string& s);

inline bool is_pedestrian(LightClass c) {
    return c == LightClass::pedestrian_red || c == LightClass::pedestrian_green;
}

enum class VerdictColor { none, red, green };

const char* to_string(VerdictColor c);

// Patch side lengths below this are discarded as unclassifiable.
inline constexpr int kMinPatchSide = 8;

// Number of buffered pedestrian predictions the majority vote runs over.
inline constexpr int kVerdictWindow = 7;

// Tight bounding box of one traffic-light component, inclusive pixel coordinates.
struct LightPatch {
    int x_min = 0, y_min = 0, x_max = 0, y_max = 0;
    int pixel_count = 0;

    int width() const { return x_max - x_min + 1; }
    int height() const { return y_max - y_min + 1; }
};

// Bounding boxes of the 8-connected traffic-light components, largest pixel
// count first; boxes smaller than kMinPatchSide on either side are dropped.
std::vector<LightPatch> extract_patches(const SegmentationFrame& frame);

// Crops the patch pixels out of the frame's colorized rendering.
RgbImage crop_patch(const RgbImage& image, const LightPatch& patch);

// Pluggable patch classifier. Implementations must be deterministic given
// their seed; `bbox` locates the patch inside the source frame.
class LightClassifier {
public:
    virtual ~LightClassifier() = default;
    virtual LightClass classify(const RgbImage& patch, const LightPatch& bbox) = 0;
};

// Enforces the patch size floor before delegating; undersized -> InvalidInput.
LightClass classify_patch(LightClassifier& classifier, const RgbImage& patch, const LightPatch& bbox);

// Sliding majority vote over the last kVerdictWindow pedestrian predictions.
struct LightVerdict {
    VerdictColor color = VerdictColor::none;
    std::deque<LightClass> buffer;  // pedestrian classes only, oldest first
};

// Appends pedestrian predictions (FIFO eviction past the window) and recomputes
// the majority color; vehicle/others predictions leave the verdict untouched.
// A red/green tie resolves to red.
LightVerdict update_verdict(LightVerdict verdict, LightClass prediction);

LightVerdict reset_verdict(LightVerdict verdict);

// Per-stream verdict state plus the staleness rule: after `reset_after_frames`
// consecutive frames with no light visible the buffer is cleared so a finished
// crossing returns the color to none.
class LightTracker {
public:
    explicit LightTracker(int reset_after_frames = 15);

    // `prediction` is the classification of this frame's largest patch, or
    // nullopt when no patch was visible.
    const LightVerdict& observe(std::optional<LightClass> prediction);

    const LightVerdict& verdict() const { return verdict_; }
    void reset();

private:
    LightVerdict verdict_;
    int frames_without_light_ = 0;
    int reset_after_frames_;
};

}  // namespace pathguide
