#include "pathguide/palette.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pathguide/errors.hpp"

namespace pathguide {

ClassPalette::ClassPalette(std::vector<PaletteEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidPalette("palette has no entries");
    if (entries_.size() > 256) throw InvalidPalette("palette exceeds 256 classes");

    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.class_id != static_cast<int>(i)) {
            throw InvalidPalette("class_ids must be contiguous from 0; entry " +
                                 std::to_string(i) + " has id " + std::to_string(e.class_id));
        }
        auto [it, inserted] = by_color_.emplace(e.color.packed(), e.class_id);
        if (!inserted) {
            throw InvalidPalette("duplicate color for classes " +
                                 std::to_string(it->second) + " and " + std::to_string(e.class_id));
        }
    }
    const bool any_walkable = std::any_of(entries_.begin(), entries_.end(),
                                          [](const PaletteEntry& e) { return e.walkable; });
    if (!any_walkable) throw InvalidPalette("palette defines no walkable class");
}

std::optional<int> ClassPalette::class_of(Rgb color) const {
    auto it = by_color_.find(color.packed());
    if (it == by_color_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> ClassPalette::find_by_name(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return e.class_id;
    }
    return std::nullopt;
}

std::shared_ptr<const ClassPalette> ClassPalette::defaults() {
    // Mapillary Vistas colors for the street classes the pipeline consumes.
    static const std::shared_ptr<const ClassPalette> palette =
        std::make_shared<ClassPalette>(std::vector<PaletteEntry>{
            {0, "void", {0, 0, 0}, false, false},
            {1, "road", {128, 64, 128}, false, false},
            {2, "sidewalk", {244, 35, 232}, true, false},
            {3, "crosswalk_plain", {140, 140, 200}, true, false},
            {4, "lane_marking_crosswalk", {200, 128, 128}, true, false},
            {5, "pedestrian_area", {96, 96, 96}, true, false},
            {6, "bike_lane", {128, 64, 255}, false, false},
            {7, "curb", {196, 196, 196}, false, false},
            {8, "traffic_light", {250, 170, 30}, false, true},
            {9, "traffic_sign_front", {220, 220, 0}, false, false},
            {10, "person", {220, 20, 60}, false, false},
            {11, "bicycle", {119, 11, 32}, false, false},
            {12, "car", {0, 0, 142}, false, false},
            {13, "vegetation", {107, 142, 35}, false, false},
            {14, "building", {70, 70, 70}, false, false},
            {15, "sky", {70, 130, 180}, false, false},
        });
    return palette;
}

namespace {

bool parse_bool_token(const std::string& tok, bool& out) {
    if (tok == "0" || tok == "false") {
        out = false;
        return true;
    }
    if (tok == "1" || tok == "true") {
        out = true;
        return true;
    }
    return false;
}

}  // namespace

std::shared_ptr<const ClassPalette> ClassPalette::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open palette file " + path);

    std::vector<PaletteEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        PaletteEntry e;
        int r, g, b;
        std::string walk_tok, light_tok;
        if (!(ss >> e.class_id)) continue;  // blank line
        if (!(ss >> e.name >> r >> g >> b >> walk_tok >> light_tok)) {
            throw ParseError(path, line_no, "expected `class_id name R G B walkable traffic_light`");
        }
        if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
            throw ParseError(path, line_no, "color channels must be 0-255");
        }
        if (!parse_bool_token(walk_tok, e.walkable) || !parse_bool_token(light_tok, e.traffic_light)) {
            throw ParseError(path, line_no, "flags must be 0/1 or true/false");
        }
        e.color = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                   static_cast<std::uint8_t>(b)};
        entries.push_back(std::move(e));
    }
    try {
        return std::make_shared<ClassPalette>(std::move(entries));
    } catch (const InvalidPalette& e) {
        throw ParseError(path, line_no, e.what());
    }
}

void ClassPalette::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "# class_id name R G B walkable traffic_light\n";
    for (const auto& e : entries_) {
        out << e.class_id << ' ' << e.name << ' ' << int(e.color.r) << ' ' << int(e.color.g)
            << ' ' << int(e.color.b) << ' ' << int(e.walkable) << ' ' << int(e.traffic_light)
            << '\n';
    }
}

SegmentationFrame make_frame(int width, int height, std::shared_ptr<const ClassPalette> palette,
                             int fill_class_id, std::int64_t frame_index) {
    if (width <= 0 || height <= 0) throw InvalidInput("frame dimensions must be positive");
    SegmentationFrame frame;
    frame.width = width;
    frame.height = height;
    frame.classes.assign(static_cast<std::size_t>(width) * height,
                         static_cast<std::uint8_t>(fill_class_id));
    frame.palette = std::move(palette);
    frame.frame_index = frame_index;
    return frame;
}

SegmentationFrame decode_mask(const RgbImage& image, std::shared_ptr<const ClassPalette> palette,
                              int tolerance, std::int64_t frame_index, DecodeStats* stats) {
    if (image.empty()) throw InvalidInput("decode_mask: empty image");
    if (!palette) throw InvalidPalette("decode_mask: null palette");

    SegmentationFrame frame = make_frame(image.width, image.height, palette, 0, frame_index);
    int unknown = 0;
    const auto& entries = palette->entries();
    const std::uint8_t* px = image.pixels.data();
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    // Masks have long same-color runs; remember the previous pixel's match.
    std::uint32_t last_key = 0xFFFFFFFFu;
    std::optional<int> last_id;
    for (std::size_t i = 0; i < n; ++i, px += 3) {
        const Rgb c{px[0], px[1], px[2]};
        if (c.packed() == last_key) {
            if (last_id) {
                frame.classes[i] = static_cast<std::uint8_t>(*last_id);
            } else {
                frame.classes[i] = 0;
                ++unknown;
            }
            continue;
        }
        auto id = palette->class_of(c);
        if (!id && tolerance > 0) {
            // Nearest entry by max per-channel distance, within tolerance; ties
            // go to the lowest class_id.
            int best_dist = tolerance + 1;
            for (const auto& e : entries) {
                const int d = std::max({std::abs(int(e.color.r) - int(c.r)),
                                        std::abs(int(e.color.g) - int(c.g)),
                                        std::abs(int(e.color.b) - int(c.b))});
                if (d < best_dist) {
                    best_dist = d;
                    id = e.class_id;
                }
            }
        }
        last_key = c.packed();
        last_id = id;
        if (id) {
            frame.classes[i] = static_cast<std::uint8_t>(*id);
        } else {
            frame.classes[i] = 0;
            ++unknown;
        }
    }
    if (stats) stats->unknown_pixels = unknown;
    return frame;
}

RgbImage render_colors(const SegmentationFrame& frame) {
    RgbImage image(frame.width, frame.height);
    const auto& entries = frame.palette->entries();
    std::uint8_t* px = image.pixels.data();
    for (std::uint8_t id : frame.classes) {
        const Rgb c = entries[id].color;
        px[0] = c.r;
        px[1] = c.g;
        px[2] = c.b;
        px += 3;
    }
    return image;
}

BoolGrid binary_mask(const SegmentationFrame& frame, const ClassSelector& selector) {
    // Per-class lookup first so the selector runs once per class, not per pixel.
    std::vector<std::uint8_t> lut(frame.palette->size(), 0);
    for (const auto& e : frame.palette->entries()) {
        lut[e.class_id] = selector(e) ? 1 : 0;
    }
    BoolGrid grid(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.classes.size(); ++i) {
        grid.cells[i] = lut[frame.classes[i]];
    }
    return grid;
}

BoolGrid walkable_mask(const SegmentationFrame& frame) {
    return binary_mask(frame, [](const PaletteEntry& e) { return e.walkable; });
}

BoolGrid traffic_light_mask(const SegmentationFrame& frame) {
    return binary_mask(frame, [](const PaletteEntry& e) { return e.traffic_light; });
}

}  // namespace pathguide
