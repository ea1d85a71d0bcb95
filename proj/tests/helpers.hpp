#pragma once

#include <random>

#include "pathguide/palette.hpp"

namespace pathguide::test {

// Default palette class ids used throughout the tests.
inline constexpr int kVoid = 0;
inline constexpr int kRoad = 1;
inline constexpr int kSidewalk = 2;
inline constexpr int kCrosswalk = 3;
inline constexpr int kLight = 8;
inline constexpr int kPerson = 10;

inline SegmentationFrame uniform_frame(int w, int h, int class_id) {
    return make_frame(w, h, ClassPalette::defaults(), class_id);
}

inline BoolGrid random_grid(std::mt19937& rng, int max_side = 64, double density = 0.5) {
    const int w = 1 + static_cast<int>(rng() % max_side);
    const int h = 1 + static_cast<int>(rng() % max_side);
    BoolGrid grid(w, h);
    for (auto& cell : grid.cells) {
        cell = (rng() % 1000) < density * 1000 ? 1 : 0;
    }
    return grid;
}

}  // namespace pathguide::test
