#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "pathguide/errors.hpp"
#include "pathguide/palette.hpp"

using namespace pathguide;
using namespace pathguide::test;

TEST_CASE("decode_mask maps exact palette colors") {
    auto palette = ClassPalette::defaults();
    const Rgb sidewalk = palette->entry(kSidewalk).color;

    RgbImage image(1, 1);
    image.set(0, 0, sidewalk.r, sidewalk.g, sidewalk.b);
    const SegmentationFrame frame = decode_mask(image, palette);
    CHECK_EQ(frame.width, 1);
    CHECK_EQ(frame.height, 1);
    CHECK_EQ(frame.at(0, 0), kSidewalk);
}

TEST_CASE("decode_mask sends unknown colors to void") {
    auto palette = ClassPalette::defaults();
    RgbImage image(1, 1);
    image.set(0, 0, 1, 2, 3);
    DecodeStats stats;
    const SegmentationFrame frame = decode_mask(image, palette, 0, 0, &stats);
    CHECK_EQ(frame.at(0, 0), kVoid);
    CHECK_EQ(stats.unknown_pixels, 1);
}

TEST_CASE("decode_mask on a 4x4 road/sidewalk checkerboard") {
    auto palette = ClassPalette::defaults();
    const Rgb road = palette->entry(kRoad).color;
    const Rgb sidewalk = palette->entry(kSidewalk).color;

    RgbImage image(4, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            const Rgb c = ((x + y) % 2 == 0) ? road : sidewalk;
            image.set(x, y, c.r, c.g, c.b);
        }
    }
    const SegmentationFrame frame = decode_mask(image, palette);
    // All 16 cells enumerated by hand.
    const int expected[4][4] = {
        {kRoad, kSidewalk, kRoad, kSidewalk},
        {kSidewalk, kRoad, kSidewalk, kRoad},
        {kRoad, kSidewalk, kRoad, kSidewalk},
        {kSidewalk, kRoad, kSidewalk, kRoad},
    };
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            CHECK_EQ(frame.at(x, y), expected[y][x]);
        }
    }
}

TEST_CASE("decode_mask rejects empty input and duplicate palettes") {
    auto palette = ClassPalette::defaults();
    CHECK_THROWS_AS(decode_mask(RgbImage{}, palette), InvalidInput);

    CHECK_THROWS_AS(ClassPalette({
                        {0, "void", {0, 0, 0}, false, false},
                        {1, "a", {9, 9, 9}, true, false},
                        {2, "b", {9, 9, 9}, false, false},
                    }),
                    InvalidPalette);
}

TEST_CASE("palette requires contiguous ids and a walkable class") {
    CHECK_THROWS_AS(ClassPalette({
                        {0, "void", {0, 0, 0}, false, false},
                        {2, "a", {9, 9, 9}, true, false},
                    }),
                    InvalidPalette);
    CHECK_THROWS_AS(ClassPalette({
                        {0, "void", {0, 0, 0}, false, false},
                        {1, "a", {9, 9, 9}, false, false},
                    }),
                    InvalidPalette);
}

TEST_CASE("decode tolerance accepts nearby colors") {
    auto palette = ClassPalette::defaults();
    const Rgb sidewalk = palette->entry(kSidewalk).color;
    RgbImage image(1, 1);
    image.set(0, 0, sidewalk.r - 1, sidewalk.g + 1, sidewalk.b);

    CHECK_EQ(decode_mask(image, palette, 0).at(0, 0), kVoid);
    CHECK_EQ(decode_mask(image, palette, 1).at(0, 0), kSidewalk);
}

TEST_CASE("render_colors then decode_mask is the identity on class grids") {
    auto palette = ClassPalette::defaults();
    std::mt19937 rng(7);
    for (int it = 0; it < 50; ++it) {
        const int w = 1 + rng() % 40;
        const int h = 1 + rng() % 30;
        SegmentationFrame frame = make_frame(w, h, palette);
        for (auto& c : frame.classes) c = static_cast<std::uint8_t>(rng() % palette->size());

        const SegmentationFrame back = decode_mask(render_colors(frame), palette);
        CHECK(back.classes == frame.classes);
    }
}

TEST_CASE("binary_mask matches per-pixel flag lookup") {
    auto palette = ClassPalette::defaults();

    SUBCASE("all-road frame is non-walkable") {
        const auto mask = walkable_mask(uniform_frame(5, 4, kRoad));
        CHECK_EQ(mask.count(), 0);
    }
    SUBCASE("all-sidewalk frame is walkable") {
        const auto mask = walkable_mask(uniform_frame(5, 4, kSidewalk));
        CHECK_EQ(mask.count(), 20);
    }
    SUBCASE("mixed 3x3 frame, per-pixel brute force") {
        SegmentationFrame frame = uniform_frame(3, 3, kVoid);
        const int classes[9] = {kRoad, kSidewalk, kCrosswalk, kVoid, kPerson,
                                kSidewalk, kLight, kRoad, kCrosswalk};
        for (int i = 0; i < 9; ++i) frame.set(i % 3, i / 3, classes[i]);
        const auto mask = walkable_mask(frame);
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 3; ++x) {
                CHECK_EQ(mask.at(x, y), palette->entry(frame.at(x, y)).walkable);
            }
        }
    }
    SUBCASE("cardinality equals selector-matching pixel count on random frames") {
        std::mt19937 rng(11);
        for (int it = 0; it < 30; ++it) {
            SegmentationFrame frame = uniform_frame(17, 13, kVoid);
            int expected = 0;
            for (auto& c : frame.classes) {
                c = static_cast<std::uint8_t>(rng() % palette->size());
                if (palette->entry(c).walkable) ++expected;
            }
            CHECK_EQ(walkable_mask(frame).count(), expected);
        }
    }
}

TEST_CASE("palette file round-trips and reports parse errors with line numbers") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pathguide_palette_test";
    fs::create_directories(dir);

    auto palette = ClassPalette::defaults();
    const std::string path = (dir / "palette.txt").string();
    palette->save(path);
    auto loaded = ClassPalette::load(path);
    REQUIRE_EQ(loaded->size(), palette->size());
    for (int i = 0; i < palette->size(); ++i) {
        CHECK_EQ(loaded->entry(i).name, palette->entry(i).name);
        CHECK(loaded->entry(i).color == palette->entry(i).color);
        CHECK_EQ(loaded->entry(i).walkable, palette->entry(i).walkable);
        CHECK_EQ(loaded->entry(i).traffic_light, palette->entry(i).traffic_light);
    }

    const std::string bad_path = (dir / "bad.txt").string();
    {
        std::ofstream out(bad_path);
        out << "0 void 0 0 0 0 0\n";
        out << "1 broken 12 distance\n";
    }
    try {
        ClassPalette::load(bad_path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK_EQ(e.line_number, 2);
    }
    fs::remove_all(dir);
}
