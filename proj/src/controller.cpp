#include "pathguide/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathguide/errors.hpp"

namespace pathguide {

YawTable YawTable::defaults() {
    YawTable t;
    auto set = [&t](int l, int m, int r, int yaw) { t.by_code[l * 4 + m * 2 + r] = yaw; };
    set(0, 0, 0, 0);  // nothing walkable: caller suppresses forward motion
    set(0, 0, 1, 30);
    set(0, 1, 0, 0);
    set(0, 1, 1, 15);
    set(1, 0, 0, -30);
    set(1, 0, 1, 0);
    set(1, 1, 0, -15);
    set(1, 1, 1, 0);
    return t;
}

void ControllerConfig::validate() const {
    if (!(h_target > 0.0)) throw InvalidInput("config: h_target must be > 0");
    if (v_f0 < 0) throw InvalidInput("config: v_f0 must be >= 0");
    if (speedup < 0) throw InvalidInput("config: speedup must be >= 0");
    if (!(theta_conf >= 0.0 && theta_conf <= 1.0))
        throw InvalidInput("config: theta_conf outside [0,1]");
    if (!(lowpass_alpha > 0.0 && lowpass_alpha <= 1.0))
        throw InvalidInput("config: lowpass_alpha outside (0,1]");
    if (highpass_deadband < 0.0) throw InvalidInput("config: highpass_deadband must be >= 0");
    if (no_light_reset_frames < 1) throw InvalidInput("config: no_light_reset_frames must be >= 1");
}

std::string VelocityCommand::rc_line() const {
    std::ostringstream ss;
    ss << "rc " << v_lr << ' ' << v_f << ' ' << v_ud << ' ' << v_yaw;
    return ss.str();
}

std::optional<VelocityCommand> VelocityCommand::parse_rc_line(const std::string& line) {
    std::istringstream ss(line);
    std::string tag;
    VelocityCommand cmd;
    if (!(ss >> tag >> cmd.v_lr >> cmd.v_f >> cmd.v_ud >> cmd.v_yaw) || tag != "rc")
        return std::nullopt;
    std::string rest;
    if (ss >> rest) return std::nullopt;
    auto ok = [](int v) { return v >= -100 && v <= 100; };
    if (!ok(cmd.v_lr) || !ok(cmd.v_f) || !ok(cmd.v_ud) || !ok(cmd.v_yaw)) return std::nullopt;
    return cmd;
}

int to_rc_units(double value) {
    const double clamped = std::clamp(value, -100.0, 100.0);
    return static_cast<int>(std::lround(clamped));  // lround = half away from zero
}

int altitude_hold(double altitude, const ControllerConfig& config) {
    const double error_ratio = (config.h_target - altitude) / config.h_target;
    return to_rc_units(error_ratio * config.v_ud_base);
}

double smooth_centroid(double raw_x, ControllerState& state, const ControllerConfig& config) {
    if (!state.has_filtered) {
        state.has_filtered = true;
        state.filtered_centroid_x = raw_x;
        state.prev_raw_centroid_x = raw_x;
        return raw_x;
    }
    // Deadband plays the high-pass role: sub-threshold jitter never reaches the
    // low-pass stage.
    double effective = raw_x;
    if (std::abs(raw_x - state.prev_raw_centroid_x) < config.highpass_deadband) {
        effective = state.prev_raw_centroid_x;
    } else {
        state.prev_raw_centroid_x = raw_x;
    }
    state.filtered_centroid_x = config.lowpass_alpha * effective +
                                (1.0 - config.lowpass_alpha) * state.filtered_centroid_x;
    return state.filtered_centroid_x;
}

int lateral_velocity(double filtered_x, int frame_width) {
    if (frame_width <= 0) throw InvalidInput("lateral_velocity: width must be > 0");
    const double half = frame_width / 2.0;
    const double gain = 100.0 / half;  // full-frame offset saturates the channel
    return to_rc_units(gain * (filtered_x - half));
}

int get_yaw_vel(const CodeTriple& codes, const ControllerConfig& config) {
    return config.yaw_table.at(codes);
}

int fuse_traffic_light(VerdictColor color, ControllerState& state, const ControllerConfig& config) {
    if (color == VerdictColor::none) {
        ++state.frames_color_none;
    } else {
        state.frames_color_none = 0;
    }
    // Crossing completed: the light has been out of verdict long enough.
    if (state.start_crossing && state.frames_color_none >= config.no_light_reset_frames) {
        state.start_crossing = false;
    }

    if (color == VerdictColor::green || state.start_crossing) {
        state.start_crossing = true;
        return config.v_f0 + config.speedup;
    }
    if (color == VerdictColor::red) return 0;
    return config.v_f0;
}

Controller::Controller(ControllerConfig config) : config_(std::move(config)) {
    config_.validate();
}

StepResult Controller::step(const WalkableAnalysis& analysis, VerdictColor color, double altitude,
                            std::int64_t frame_index) {
    StepResult result;
    VelocityCommand& cmd = result.command;

    cmd.v_ud = altitude_hold(altitude, config_);
    // The latch state machine tracks every frame, including search frames.
    const int fused_v_f = fuse_traffic_light(color, state_, config_);

    if (analysis.present) {
        const double filtered = smooth_centroid(analysis.centroid->x, state_, config_);
        cmd.v_lr = lateral_velocity(filtered, analysis.component_mask.width);
        cmd.v_yaw = get_yaw_vel(analysis.codes, config_);
        if (analysis.codes == CodeTriple{0, 0, 0}) {
            cmd.v_f = 0;  // walkable area too thin to trust: hold position
        } else {
            cmd.v_f = fused_v_f;
        }
    } else {
        // No walkable area anywhere: hover and rotate until the path reappears.
        cmd.v_lr = 0;
        cmd.v_f = 0;
        cmd.v_yaw = config_.search_yaw;
    }

    cmd.v_lr = to_rc_units(cmd.v_lr);
    cmd.v_f = to_rc_units(cmd.v_f);
    cmd.v_ud = to_rc_units(cmd.v_ud);
    cmd.v_yaw = to_rc_units(cmd.v_yaw);

    if (color == VerdictColor::red && state_.prev_color != VerdictColor::red) {
        result.voice = VoiceEvent{"stop", frame_index};
    } else if (color == VerdictColor::green && state_.prev_color == VerdictColor::red) {
        result.voice = VoiceEvent{"go", frame_index};
    }
    state_.prev_color = color;

    return result;
}

}  // namespace pathguide
