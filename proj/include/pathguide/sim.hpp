#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pathguide/controller.hpp"
#include "pathguide/geometry.hpp"
#include "pathguide/lights.hpp"
#include "pathguide/palette.hpp"

namespace pathguide {

enum class LightKind { pedestrian, vehicle };
enum class PhaseColor { red, green };

const char* to_string(PhaseColor c);

struct LightPhase {
    PhaseColor color = PhaseColor::red;
    double duration = 0.0;  // seconds, > 0
};

struct TrafficLightSpec {
    LightKind kind = LightKind::pedestrian;
    double x = 0.0, y = 0.0;
    double head_height = 2.5;   // meters, center of the head above ground
    double facing = 0.0;        // radians, direction the lit face points
    double head_size = 0.35;    // meters, billboard diameter
    double phase_offset = 0.0;  // seconds
    std::vector<LightPhase> schedule;

    double cycle_length() const;
};

// Color of the schedule cycle at (time + phase_offset + extra_offset); boundary
// instants belong to the newly starting phase.
PhaseColor light_color_at(const TrafficLightSpec& light, double time, double extra_offset = 0.0);

struct PaintedSurface {
    Polygon polygon;  // world meters
    int class_id = 0;
    Aabb bbox;            // derived on load
    double height = 0.0;  // > 0 renders the footprint extruded as an occluding prism
};

struct CameraSpec {
    int width = 320;
    int height = 240;
    double pitch_deg = 35.0;      // below horizon
    double hfov_deg = 70.0;       // (10, 170)
    double mount_offset = 0.3;    // camera height above the drone altitude reference
};

struct CrossingZone {
    Polygon polygon;
    int light_index = 0;  // governing pedestrian light
};

struct Scenario {
    int version = 1;
    std::string name;
    std::uint32_t seed = 1;
    std::vector<PaintedSurface> surfaces;   // painted in order, later entries on top
    std::vector<PaintedSurface> obstacles;  // painted after all surfaces
    std::vector<TrafficLightSpec> lights;
    Vec2 start_pos;
    double start_heading = 0.0;
    double start_altitude = 1.2;
    Polygon goal;
    CameraSpec camera;
    std::vector<Vec2> centerline;           // optional, reference line for deviation metrics
    std::vector<CrossingZone> crossings;    // optional, for red-light violation metrics
    int step_cap = 2000;
    double pixel_noise = 0.0;               // per-pixel class flip probability
    double phase_jitter_min = 0.0;          // per-run light offset jitter window, seconds
    double phase_jitter_max = 0.0;

    // Parses the line-oriented scenario text format (docs/scenario_format.md).
    static Scenario load(const std::string& path, const ClassPalette& palette);
    void validate(const ClassPalette& palette) const;  // throws InvalidInput

    // Per-run extra phase offset (one uniform draw from [phase_jitter_min,
    // phase_jitter_max) shared by all lights), deterministic in the run seed.
    std::vector<double> draw_phase_jitter(std::uint32_t run_seed) const;

    // Topmost painted class at a world point (obstacles over surfaces), or 0.
    int class_at(const Vec2& p) const;
};

struct DroneState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians in (-pi, pi]; +yaw turns toward the camera's right
    double h = 1.2;        // meters
    double time = 0.0;     // seconds
};

struct WorldState {
    DroneState drone;
    std::vector<PhaseColor> light_colors;
    std::int64_t step_index = 0;
};

WorldState initial_world(const Scenario& scenario, const std::vector<double>& phase_jitter);

// RC-unit to physical-rate calibration.
struct SimCalib {
    double k_lin = 0.02;    // m/s per RC unit
    double k_yaw = 0.015;   // rad/s per RC unit
    double k_vert = 0.01;   // m/s per RC unit
};

WorldState step_kinematics(const WorldState& world, const Scenario& scenario,
                           const VelocityCommand& command, double dt, const SimCalib& calib,
                           const std::vector<double>& phase_jitter);

// Projection of a world point into the image: pixel column/row and the depth
// along the optical axis (positive in front of the camera).
struct Projection {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

// Ground-plane pinhole renderer. Per-pixel camera-frame ray slopes are cached,
// so one instance should be reused across a run.
class Renderer {
public:
    Renderer(const Scenario& scenario, std::shared_ptr<const ClassPalette> palette);

    // Deterministic: identical world states render identical frames.
    SegmentationFrame render(const WorldState& world) const;

    std::optional<Projection> project(const DroneState& drone, double wx, double wy, double wz) const;

    double camera_height(const DroneState& drone) const;

private:
    const Scenario& scenario_;
    std::shared_ptr<const ClassPalette> palette_;
    int traffic_light_class_ = 0;
    std::vector<double> ray_a_;  // per-column lateral slope
    std::vector<double> ray_b_;  // per-row vertical slope
    double focal_px_ = 0.0;
};

// Fulfills the classifier contract from simulator ground truth: the nearest
// front-facing light's (kind, color) maps to its class; with probability
// `noise` a seeded-uniform wrong class is substituted.
class OracleClassifier : public LightClassifier {
public:
    OracleClassifier(const Scenario& scenario, const Renderer& renderer, double noise,
                     std::uint32_t seed);

    // Binds the world state the next classifications are evaluated against.
    void bind(const WorldState& world, const std::vector<double>& phase_jitter);

    LightClass classify(const RgbImage& patch, const LightPatch& bbox) override;

private:
    const Scenario& scenario_;
    const Renderer& renderer_;
    double noise_;
    std::mt19937 rng_;
    const WorldState* world_ = nullptr;
    const std::vector<double>* phase_jitter_ = nullptr;
};

// One closed-loop step as recorded in the run log.
struct StepRecord {
    std::int64_t frame_index = 0;
    double time = 0.0;
    double x = 0.0, y = 0.0, heading = 0.0, h = 0.0;
    VelocityCommand command;
    VerdictColor color = VerdictColor::none;
    std::optional<VoiceEvent> voice;
    bool present = false;
    double centroid_x = 0.0, centroid_y = 0.0;
    CodeTriple codes;
    int pixel_count = 0;
    int light_patches = 0;  // only the largest is classified; the rest are logged
};

struct Metrics {
    double rms_deviation = 0.0;       // meters from the centerline, NaN when no centerline
    double max_deviation = 0.0;
    double walkable_fraction = 0.0;   // steps with the drone over a walkable class
    int red_light_violations = 0;     // crossing entries while the governing light is red
    int obstacle_hits = 0;            // steps inside an obstacle polygon
    bool goal_reached = false;
    std::int64_t steps_to_goal = -1;
    std::int64_t total_steps = 0;
};

Metrics score(const std::vector<StepRecord>& records, const Scenario& scenario,
              const ClassPalette& palette, const std::vector<double>& phase_jitter);

}  // namespace pathguide
