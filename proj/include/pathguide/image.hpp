#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pathguide {

// Interleaved 8-bit RGB image, row-major, origin at the top-left pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(3) * w * h, 0) {}

    bool empty() const { return width <= 0 || height <= 0; }

    std::uint8_t* at(int x, int y) {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = at(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
};

RgbImage read_png(const std::string& path);
void write_png(const std::string& path, const RgbImage& image);

// H x W boolean grid (stored as 0/1 bytes), row-major.
struct BoolGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    BoolGrid() = default;
    BoolGrid(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

    bool empty() const { return width <= 0 || height <= 0; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool at(int x, int y) const { return cells[index(x, y)] != 0; }
    void set(int x, int y, bool v) { cells[index(x, y)] = v ? 1 : 0; }
    int count() const;

    bool operator==(const BoolGrid& o) const = default;
};

}  // namespace pathguide
