#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathguide/image.hpp"

namespace pathguide {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
    std::uint32_t packed() const {
        return (std::uint32_t(r) << 16) | (std::uint32_t(g) << 8) | std::uint32_t(b);
    }
};

struct PaletteEntry {
    int class_id = 0;
    std::string name;
    Rgb color;
    bool walkable = false;
    bool traffic_light = false;
};

// Immutable set of semantic classes with their mask colors and role flags.
// class_ids are contiguous from 0; id 0 is the void/unknown class.
class ClassPalette {
public:
    explicit ClassPalette(std::vector<PaletteEntry> entries);

    // Mapillary-style colors for the street classes the guidance pipeline cares about.
    static std::shared_ptr<const ClassPalette> defaults();

    // Line format: `class_id name R G B walkable traffic_light`, '#' starts a comment.
    static std::shared_ptr<const ClassPalette> load(const std::string& path);
    void save(const std::string& path) const;

    const std::vector<PaletteEntry>& entries() const { return entries_; }
    const PaletteEntry& entry(int class_id) const { return entries_.at(class_id); }
    int size() const { return static_cast<int>(entries_.size()); }

    std::optional<int> class_of(Rgb color) const;
    std::optional<int> find_by_name(const std::string& name) const;

private:
    std::vector<PaletteEntry> entries_;
    std::unordered_map<std::uint32_t, int> by_color_;
};

// Hard-label class grid decoded from a colorized prediction.
struct SegmentationFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> classes;  // row-major class ids
    std::shared_ptr<const ClassPalette> palette;
    std::int64_t frame_index = 0;

    int at(int x, int y) const {
        return classes[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, int class_id) {
        classes[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint8_t>(class_id);
    }
};

SegmentationFrame make_frame(int width, int height, std::shared_ptr<const ClassPalette> palette,
                             int fill_class_id = 0, std::int64_t frame_index = 0);

struct DecodeStats {
    int unknown_pixels = 0;
};

// Maps each pixel to the palette entry with exactly matching color; colors not in the
// palette fall back to class 0. `tolerance` is the max per-channel distance accepted
// for lossy inputs (0 keeps matching exact).
SegmentationFrame decode_mask(const RgbImage& image,
                              std::shared_ptr<const ClassPalette> palette,
                              int tolerance = 0,
                              std::int64_t frame_index = 0,
                              DecodeStats* stats = nullptr);

// Inverse of decode_mask: paints every cell with its class color.
RgbImage render_colors(const SegmentationFrame& frame);

using ClassSelector = std::function<bool(const PaletteEntry&)>;

BoolGrid binary_mask(const SegmentationFrame& frame, const ClassSelector& selector);
BoolGrid walkable_mask(const SegmentationFrame& frame);
BoolGrid traffic_light_mask(const SegmentationFrame& frame);

}  // namespace pathguide
