#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pathguide/sim.hpp"
#include "pathguide/walkable.hpp"

using namespace pathguide;
using namespace pathguide::test;

namespace {

PaintedSurface rect_surface(double x0, double y0, double x1, double y1, int class_id) {
    PaintedSurface s;
    s.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    s.class_id = class_id;
    s.bbox = Aabb::of(s.polygon);
    return s;
}

// Straight sidewalk strip along +x, 2 m wide, camera at the defaults.
Scenario strip_scenario() {
    Scenario sc;
    sc.name = "strip";
    sc.seed = 1;
    sc.surfaces.push_back(rect_surface(-2.0, -1.0, 40.0, 1.0, kSidewalk));
    sc.start_pos = {0.0, 0.0};
    sc.start_heading = 0.0;
    sc.start_altitude = 1.2;
    sc.goal = {{38.0, -1.0}, {39.0, -1.0}, {39.0, 1.0}, {38.0, 1.0}};
    return sc;
}

TrafficLightSpec simple_light(double red_s = 10.0, double green_s = 10.0) {
    TrafficLightSpec light;
    light.schedule = {{PhaseColor::red, red_s}, {PhaseColor::green, green_s}};
    return light;
}

}  // namespace

TEST_CASE("light_color_at walks the schedule cycle") {
    const auto light = simple_light();
    CHECK_EQ(light_color_at(light, 0.0), PhaseColor::red);
    CHECK_EQ(light_color_at(light, 9.99), PhaseColor::red);
    CHECK_EQ(light_color_at(light, 10.0), PhaseColor::green);  // boundary starts the new phase
    CHECK_EQ(light_color_at(light, 25.0), PhaseColor::red);    // 25 mod 20 = 5

    // Periodic with the cycle length.
    for (double t : {0.0, 3.7, 9.999, 10.0, 13.37, 19.99}) {
        CHECK_EQ(light_color_at(light, t), light_color_at(light, t + 20.0));
        CHECK_EQ(light_color_at(light, t), light_color_at(light, t + 200.0));
    }

    // Phase offsets shift the cycle.
    auto shifted = light;
    shifted.phase_offset = 10.0;
    CHECK_EQ(light_color_at(shifted, 0.0), PhaseColor::green);
    CHECK_EQ(light_color_at(light, 0.0, 10.0), PhaseColor::green);
}

TEST_CASE("step_kinematics") {
    Scenario sc = strip_scenario();
    const std::vector<double> offsets;
    const SimCalib calib;
    WorldState world = initial_world(sc, offsets);

    SUBCASE("zero command changes only time and step index") {
        const WorldState next = step_kinematics(world, sc, {}, 0.1, calib, offsets);
        CHECK_EQ(next.drone.x, world.drone.x);
        CHECK_EQ(next.drone.y, world.drone.y);
        CHECK_EQ(next.drone.heading, world.drone.heading);
        CHECK_EQ(next.drone.h, world.drone.h);
        CHECK_EQ(next.drone.time, doctest::Approx(0.1));
        CHECK_EQ(next.step_index, 1);
    }
    SUBCASE("forward velocity integrates along the heading") {
        VelocityCommand cmd;
        cmd.v_f = 50;
        const WorldState next = step_kinematics(world, sc, cmd, 1.0, calib, offsets);
        CHECK_EQ(next.drone.x, doctest::Approx(1.0).epsilon(1e-12));  // 50 * 0.02 * 1
        CHECK_EQ(next.drone.y, doctest::Approx(0.0));
    }
    SUBCASE("yaw rate integrates into the heading") {
        VelocityCommand cmd;
        cmd.v_yaw = 100;
        const WorldState next = step_kinematics(world, sc, cmd, 1.0, calib, offsets);
        CHECK_EQ(next.drone.heading, doctest::Approx(1.5).epsilon(1e-12));  // 100 * 0.015
    }
    SUBCASE("positive v_lr moves toward the +yaw side") {
        VelocityCommand cmd;
        cmd.v_lr = 50;
        const WorldState next = step_kinematics(world, sc, cmd, 1.0, calib, offsets);
        CHECK_EQ(next.drone.x, doctest::Approx(0.0));
        CHECK_EQ(next.drone.y, doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("altitude floors at zero") {
        VelocityCommand cmd;
        cmd.v_ud = -100;
        WorldState w = world;
        for (int i = 0; i < 10; ++i) w = step_kinematics(w, sc, cmd, 1.0, calib, offsets);
        CHECK_EQ(w.drone.h, 0.0);
    }
    SUBCASE("two half steps equal one full step for constant commands") {
        VelocityCommand cmd;
        cmd.v_f = 37;
        cmd.v_lr = -12;
        cmd.v_ud = 5;
        const WorldState one = step_kinematics(world, sc, cmd, 0.2, calib, offsets);
        WorldState two = step_kinematics(world, sc, cmd, 0.1, calib, offsets);
        two = step_kinematics(two, sc, cmd, 0.1, calib, offsets);
        CHECK_EQ(two.drone.x, doctest::Approx(one.drone.x).epsilon(1e-12));
        CHECK_EQ(two.drone.y, doctest::Approx(one.drone.y).epsilon(1e-12));
        CHECK_EQ(two.drone.h, doctest::Approx(one.drone.h).epsilon(1e-12));

        cmd.v_yaw = 40;
        const WorldState oney = step_kinematics(world, sc, cmd, 0.2, calib, offsets);
        WorldState twoy = step_kinematics(world, sc, cmd, 0.1, calib, offsets);
        twoy = step_kinematics(twoy, sc, cmd, 0.1, calib, offsets);
        CHECK_EQ(twoy.drone.heading, doctest::Approx(oney.drone.heading).epsilon(1e-9));
    }
}

TEST_CASE("render: centered strip is symmetric and grounded") {
    Scenario sc = strip_scenario();
    auto palette = ClassPalette::defaults();
    Renderer renderer(sc, palette);
    const std::vector<double> offsets;
    const WorldState world = initial_world(sc, offsets);

    const SegmentationFrame frame = renderer.render(world);
    const auto a = analyze(frame, 0.30);
    REQUIRE(a.present);
    // Mirror symmetry puts the centroid exactly on the image center column.
    CHECK_EQ(a.centroid->x, doctest::Approx((sc.camera.width - 1) / 2.0).epsilon(1e-12));
    CHECK_EQ(a.codes.middle, 1);

    SUBCASE("rendering is deterministic") {
        const SegmentationFrame again = renderer.render(world);
        CHECK(again.classes == frame.classes);
    }
    SUBCASE("displacing the drone left moves the centroid right") {
        WorldState shifted = world;
        shifted.drone.y = -1.0;  // 1 m to the left of the strip center
        const auto a2 = analyze(renderer.render(shifted), 0.30);
        REQUIRE(a2.present);
        CHECK_GT(a2.centroid->x, (sc.camera.width - 1) / 2.0);
    }
    SUBCASE("no surfaces in view renders all void") {
        WorldState away = world;
        away.drone.x = 500.0;
        away.drone.y = 500.0;
        const auto a3 = analyze(renderer.render(away), 0.30);
        CHECK_FALSE(a3.present);
    }
}

TEST_CASE("render: optical axis ground point projects to the image center") {
    Scenario sc = strip_scenario();
    Renderer renderer(sc, ClassPalette::defaults());
    const WorldState world = initial_world(sc, {});

    const double zc = renderer.camera_height(world.drone);
    const double pitch = sc.camera.pitch_deg * std::numbers::pi / 180.0;
    const double ahead = zc / std::tan(pitch);
    const auto proj = renderer.project(world.drone, world.drone.x + ahead, world.drone.y, 0.0);
    REQUIRE(proj.has_value());
    CHECK_EQ(proj->u, doctest::Approx((sc.camera.width - 1) / 2.0).epsilon(1e-12));
    CHECK_EQ(proj->v, doctest::Approx((sc.camera.height - 1) / 2.0).epsilon(1e-9));

    // Points behind the camera do not project.
    CHECK_FALSE(renderer.project(world.drone, world.drone.x - 5.0, 0.0, 1.0).has_value());
}

TEST_CASE("render: light heads become traffic-light patches with true classes") {
    Scenario sc = strip_scenario();
    sc.camera.pitch_deg = 10.0;  // keep the head in the frustum
    TrafficLightSpec ped = simple_light();
    ped.kind = LightKind::pedestrian;
    ped.x = 6.0;
    ped.y = 0.0;
    ped.head_height = 2.0;
    ped.facing = std::numbers::pi;  // facing back toward the drone
    ped.head_size = 0.35;
    sc.lights.push_back(ped);

    auto palette = ClassPalette::defaults();
    Renderer renderer(sc, palette);
    const auto offsets = sc.draw_phase_jitter(sc.seed);
    WorldState world = initial_world(sc, offsets);

    const SegmentationFrame frame = renderer.render(world);
    const auto patches = extract_patches(frame);
    REQUIRE_FALSE(patches.empty());

    OracleClassifier oracle(sc, renderer, 0.0, 7);
    oracle.bind(world, offsets);
    RgbImage patch_px(patches[0].width(), patches[0].height());
    SUBCASE("red phase reads pedestrian_red") {
        CHECK_EQ(oracle.classify(patch_px, patches[0]), LightClass::pedestrian_red);
    }
    SUBCASE("green phase reads pedestrian_green") {
        // Advance into the green phase.
        VelocityCommand idle;
        WorldState later = world;
        const SimCalib calib;
        while (later.drone.time < 11.0) {
            later = step_kinematics(later, sc, idle, 1.0, calib, offsets);
        }
        oracle.bind(later, offsets);
        CHECK_EQ(oracle.classify(patch_px, patches[0]), LightClass::pedestrian_green);
    }
    SUBCASE("vehicle lights read as vehicle classes") {
        Scenario sv = sc;
        sv.lights[0].kind = LightKind::vehicle;
        Renderer r2(sv, palette);
        OracleClassifier o2(sv, r2, 0.0, 7);
        o2.bind(world, offsets);
        CHECK_EQ(o2.classify(patch_px, patches[0]), LightClass::vehicle_red);
    }
    SUBCASE("side- or back-facing lights read as others") {
        Scenario sv = sc;
        sv.lights[0].facing = 0.0;  // facing away from the approaching drone
        Renderer r2(sv, palette);
        OracleClassifier o2(sv, r2, 0.0, 7);
        o2.bind(world, offsets);
        CHECK_EQ(o2.classify(patch_px, patches[0]), LightClass::others);
    }
    SUBCASE("full noise substitutes a seeded deterministic wrong class") {
        OracleClassifier noisy(sc, renderer, 1.0, 1234);
        noisy.bind(world, offsets);
        std::vector<LightClass> seq;
        for (int i = 0; i < 6; ++i) seq.push_back(noisy.classify(patch_px, patches[0]));
        for (LightClass c : seq) CHECK_NE(c, LightClass::pedestrian_red);  // truth excluded
        OracleClassifier replayed(sc, renderer, 1.0, 1234);
        replayed.bind(world, offsets);
        for (int i = 0; i < 6; ++i) CHECK_EQ(replayed.classify(patch_px, patches[0]), seq[i]);
    }
}

TEST_CASE("render: pixel noise is seeded per frame") {
    Scenario sc = strip_scenario();
    sc.pixel_noise = 0.05;
    sc.seed = 9;
    Renderer renderer(sc, ClassPalette::defaults());
    const WorldState world = initial_world(sc, {});

    const SegmentationFrame a = renderer.render(world);
    const SegmentationFrame b = renderer.render(world);
    CHECK(a.classes == b.classes);  // same frame index, same noise

    WorldState later = world;
    later.step_index = 1;
    const SegmentationFrame c = renderer.render(later);
    CHECK(a.classes != c.classes);  // a fresh noise stream per frame

    Scenario clean = strip_scenario();
    Renderer clean_renderer(clean, ClassPalette::defaults());
    const SegmentationFrame d = clean_renderer.render(world);
    CHECK(a.classes != d.classes);
}

TEST_CASE("score") {
    Scenario sc = strip_scenario();
    sc.centerline = {{0.0, 0.0}, {40.0, 0.0}};
    const auto palette = ClassPalette::defaults();
    const std::vector<double> offsets;

    auto record_at = [](double x, double y, std::int64_t i, double t) {
        StepRecord r;
        r.frame_index = i;
        r.time = t;
        r.x = x;
        r.y = y;
        return r;
    };

    SUBCASE("hand-constructed offsets 0.1/0.2/0.2 give rms sqrt(0.03)") {
        std::vector<StepRecord> records = {record_at(1.0, 0.1, 0, 0.0),
                                           record_at(2.0, 0.2, 1, 0.1),
                                           record_at(3.0, 0.2, 2, 0.2)};
        const Metrics m = score(records, sc, *palette, offsets);
        CHECK_EQ(m.rms_deviation, doctest::Approx(std::sqrt(0.03)).epsilon(1e-12));
        CHECK_EQ(m.max_deviation, doctest::Approx(0.2).epsilon(1e-12));
        CHECK_EQ(m.walkable_fraction, 1.0);
        CHECK_FALSE(m.goal_reached);
    }
    SUBCASE("a centered run scores zero deviation and reaches the goal") {
        std::vector<StepRecord> records;
        for (int i = 0; i <= 77; ++i) records.push_back(record_at(i * 0.5, 0.0, i, i * 0.1));
        const Metrics m = score(records, sc, *palette, offsets);
        CHECK_EQ(m.rms_deviation, 0.0);
        CHECK_EQ(m.red_light_violations, 0);
        CHECK(m.goal_reached);
        CHECK_EQ(m.steps_to_goal, 76);  // x = 38.0 enters the goal box
    }
    SUBCASE("crossing entry on red counts one violation") {
        Scenario sx = sc;
        TrafficLightSpec ped = simple_light();  // red for t in [0,10)
        ped.kind = LightKind::pedestrian;
        sx.lights.push_back(ped);
        sx.crossings.push_back({{{10.0, -1.0}, {16.0, -1.0}, {16.0, 1.0}, {10.0, 1.0}}, 0});
        const std::vector<double> off = {0.0};

        std::vector<StepRecord> red_entry = {record_at(9.0, 0.0, 0, 0.0),
                                             record_at(11.0, 0.0, 1, 1.0),
                                             record_at(12.0, 0.0, 2, 2.0)};
        CHECK_EQ(score(red_entry, sx, *palette, off).red_light_violations, 1);

        std::vector<StepRecord> green_entry = {record_at(9.0, 0.0, 0, 9.0),
                                               record_at(11.0, 0.0, 1, 11.0),
                                               record_at(12.0, 0.0, 2, 12.0)};
        CHECK_EQ(score(green_entry, sx, *palette, off).red_light_violations, 0);
    }
    SUBCASE("obstacle intersections are counted") {
        Scenario so = sc;
        so.obstacles.push_back(rect_surface(5.0, -0.3, 5.6, 0.3, kPerson));
        std::vector<StepRecord> records = {record_at(4.0, 0.0, 0, 0.0),
                                           record_at(5.3, 0.0, 1, 0.1),
                                           record_at(6.0, 0.0, 2, 0.2)};
        const Metrics m = score(records, so, *palette, offsets);
        CHECK_EQ(m.obstacle_hits, 1);
        // The obstacle is painted over the sidewalk, so that step is off-path.
        CHECK_EQ(m.walkable_fraction, doctest::Approx(2.0 / 3.0));
    }
}
