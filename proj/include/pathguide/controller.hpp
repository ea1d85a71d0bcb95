#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pathguide/lights.hpp"
#include "pathguide/walkable.hpp"

namespace pathguide {

// Yaw velocity per binary control code, indexed by CodeTriple::index().
// Negative values turn left.
struct YawTable {
    std::array<int, 8> by_code{};

    static YawTable defaults();
    int at(const CodeTriple& codes) const { return by_code[codes.index()]; }
};

struct ControllerConfig {
    double h_target = 1.2;        // meters
    int v_ud_base = 40;           // RC units of up/down authority
    int v_f0 = 20;                // preset forward velocity, RC units
    int speedup = 15;             // added while crossing, RC units
    double theta_conf = 0.30;
    YawTable yaw_table = YawTable::defaults();
    double lowpass_alpha = 0.5;        // (0, 1]
    double highpass_deadband = 2.0;    // pixels
    int no_light_reset_frames = 15;    // color=none frames before the crossing latch clears
    int search_yaw = 20;               // rotation command while no walkable area is visible

    void validate() const;  // throws InvalidInput
};

struct ControllerState {
    bool start_crossing = false;
    double filtered_centroid_x = 0.0;
    bool has_filtered = false;
    double prev_raw_centroid_x = 0.0;
    int frames_color_none = 0;
    VerdictColor prev_color = VerdictColor::none;
};

// The four RC channels, integers in [-100, 100].
struct VelocityCommand {
    int v_lr = 0;
    int v_f = 0;
    int v_ud = 0;
    int v_yaw = 0;

    bool operator==(const VelocityCommand&) const = default;
    // Tello-style wire line: `rc <v_lr> <v_f> <v_ud> <v_yaw>`.
    std::string rc_line() const;
    static std::optional<VelocityCommand> parse_rc_line(const std::string& line);
};

struct VoiceEvent {
    std::string text;  // "stop" or "go"
    std::int64_t frame_index = 0;
};

// Clamps to [-100, 100] then rounds half away from zero.
int to_rc_units(double value);

// Proportional altitude law: (h_target - h) / h_target * v_ud_base.
int altitude_hold(double altitude, const ControllerConfig& config);

// Deadband then exponential low-pass on the centroid column; updates state.
double smooth_centroid(double raw_x, ControllerState& state, const ControllerConfig& config);

// Centroid offset from the image center column, normalized so a half-width
// offset saturates the channel.
int lateral_velocity(double filtered_x, int frame_width);

int get_yaw_vel(const CodeTriple& codes, const ControllerConfig& config);

// Forward-velocity fusion with the crossing latch; updates state.
int fuse_traffic_light(VerdictColor color, ControllerState& state, const ControllerConfig& config);

struct StepResult {
    VelocityCommand command;
    std::optional<VoiceEvent> voice;
};

// Single-owner per-stream controller; steps are ordered by frame_index.
class Controller {
public:
    explicit Controller(ControllerConfig config);

    StepResult step(const WalkableAnalysis& analysis, VerdictColor color, double altitude,
                    std::int64_t frame_index);

    const ControllerConfig& config() const { return config_; }
    const ControllerState& state() const { return state_; }
    void reset_state() { state_ = ControllerState{}; }

private:
    ControllerConfig config_;
    ControllerState state_;
};

}  // namespace pathguide
