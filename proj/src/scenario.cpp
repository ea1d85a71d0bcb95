#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pathguide/errors.hpp"
#include "pathguide/rng.hpp"
#include "pathguide/sim.hpp"

namespace pathguide {

const char* to_string(PhaseColor c) {
    return c == PhaseColor::red ? "red" : "green";
}

double TrafficLightSpec::cycle_length() const {
    double total = 0.0;
    for (const auto& p : schedule) total += p.duration;
    return total;
}

PhaseColor light_color_at(const TrafficLightSpec& light, double time, double extra_offset) {
    const double cycle = light.cycle_length();
    double pos = std::fmod(time + light.phase_offset + extra_offset, cycle);
    if (pos < 0.0) pos += cycle;
    double acc = 0.0;
    for (const auto& p : light.schedule) {
        acc += p.duration;
        if (pos < acc) return p.color;
    }
    return light.schedule.back().color;  // pos == cycle after rounding
}

std::vector<double> Scenario::draw_phase_jitter(std::uint32_t run_seed) const {
    // One jitter draw per run, applied to every light: the whole intersection
    // shifts together, as a single signal controller would. Values are extra
    // seconds on top of each light's own phase_offset.
    std::mt19937 rng(mix_seed(run_seed, 0x70686173));
    const double span = phase_jitter_max - phase_jitter_min;
    const double jitter = span > 0.0 ? phase_jitter_min + span * uniform01(rng) : 0.0;
    return std::vector<double>(lights.size(), jitter);
}

int Scenario::class_at(const Vec2& p) const {
    // Obstacles are painted after surfaces, so they win; within each list the
    // later entry is on top.
    for (auto it = obstacles.rbegin(); it != obstacles.rend(); ++it) {
        if (it->bbox.contains(p) && point_in_polygon(p, it->polygon)) return it->class_id;
    }
    for (auto it = surfaces.rbegin(); it != surfaces.rend(); ++it) {
        if (it->bbox.contains(p) && point_in_polygon(p, it->polygon)) return it->class_id;
    }
    return 0;
}

WorldState initial_world(const Scenario& scenario, const std::vector<double>& phase_jitter) {
    WorldState world;
    world.drone.x = scenario.start_pos.x;
    world.drone.y = scenario.start_pos.y;
    world.drone.heading = normalize_angle(scenario.start_heading);
    world.drone.h = scenario.start_altitude;
    world.drone.time = 0.0;
    world.light_colors.reserve(scenario.lights.size());
    for (std::size_t i = 0; i < scenario.lights.size(); ++i) {
        world.light_colors.push_back(light_color_at(scenario.lights[i], 0.0, phase_jitter[i]));
    }
    return world;
}

WorldState step_kinematics(const WorldState& world, const Scenario& scenario,
                           const VelocityCommand& command, double dt, const SimCalib& calib,
                           const std::vector<double>& phase_jitter) {
    if (!(dt > 0.0)) throw InvalidInput("step_kinematics: dt must be > 0");
    WorldState next = world;
    DroneState& d = next.drone;

    d.heading = normalize_angle(d.heading + calib.k_yaw * command.v_yaw * dt);
    const double fx = std::cos(d.heading);
    const double fy = std::sin(d.heading);
    // The camera's right-hand side: the direction the nose swings under +yaw.
    const double rx = -fy;
    const double ry = fx;
    d.x += (calib.k_lin * command.v_f * fx + calib.k_lin * command.v_lr * rx) * dt;
    d.y += (calib.k_lin * command.v_f * fy + calib.k_lin * command.v_lr * ry) * dt;
    d.h = std::max(0.0, d.h + calib.k_vert * command.v_ud * dt);
    d.time += dt;

    for (std::size_t i = 0; i < scenario.lights.size(); ++i) {
        next.light_colors[i] = light_color_at(scenario.lights[i], d.time, phase_jitter[i]);
    }
    next.step_index = world.step_index + 1;
    return next;
}

// ---------------------------------------------------------------------------
// Scenario file parsing
// ---------------------------------------------------------------------------

namespace {

Polygon parse_polygon(std::istringstream& ss, const std::string& path, int line_no) {
    Polygon poly;
    double x, y;
    while (ss >> x) {
        if (!(ss >> y)) throw ParseError(path, line_no, "odd number of polygon coordinates");
        poly.push_back({x, y});
    }
    if (poly.size() < 3) throw ParseError(path, line_no, "polygon needs at least 3 vertices");
    return poly;
}

int resolve_class(const std::string& name, const ClassPalette& palette, const std::string& path,
                  int line_no) {
    auto id = palette.find_by_name(name);
    if (!id) throw ParseError(path, line_no, "unknown class name `" + name + "`");
    return *id;
}

}  // namespace

Scenario Scenario::load(const std::string& path, const ClassPalette& palette) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);

    Scenario sc;
    bool saw_version = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;

        if (!saw_version) {
            if (key != "scenario_version")
                throw ParseError(path, line_no, "file must start with `scenario_version 1`");
            int v = 0;
            if (!(ss >> v) || v != 1)
                throw ParseError(path, line_no, "unsupported scenario version");
            sc.version = v;
            saw_version = true;
            continue;
        }

        if (key == "name") {
            ss >> sc.name;
        } else if (key == "seed") {
            if (!(ss >> sc.seed)) throw ParseError(path, line_no, "seed expects an integer");
        } else if (key == "step_cap") {
            if (!(ss >> sc.step_cap) || sc.step_cap <= 0)
                throw ParseError(path, line_no, "step_cap expects a positive integer");
        } else if (key == "camera") {
            if (!(ss >> sc.camera.width >> sc.camera.height >> sc.camera.pitch_deg >>
                  sc.camera.hfov_deg >> sc.camera.mount_offset))
                throw ParseError(path, line_no, "camera expects `W H pitch_deg hfov_deg mount_offset`");
        } else if (key == "start") {
            if (!(ss >> sc.start_pos.x >> sc.start_pos.y >> sc.start_heading >> sc.start_altitude))
                throw ParseError(path, line_no, "start expects `x y heading_rad altitude`");
        } else if (key == "goal") {
            sc.goal = parse_polygon(ss, path, line_no);
        } else if (key == "surface" || key == "obstacle") {
            std::string cls;
            if (!(ss >> cls)) throw ParseError(path, line_no, key + " expects a class name");
            PaintedSurface s;
            s.class_id = resolve_class(cls, palette, path, line_no);
            if (key == "obstacle") {
                // Obstacles carry a body height: `obstacle <class> <height> <polygon...>`.
                if (!(ss >> s.height) || s.height < 0.0)
                    throw ParseError(path, line_no, "obstacle expects `class height polygon...`");
            }
            s.polygon = parse_polygon(ss, path, line_no);
            s.bbox = Aabb::of(s.polygon);
            (key == "surface" ? sc.surfaces : sc.obstacles).push_back(std::move(s));
        } else if (key == "light") {
            TrafficLightSpec light;
            std::string kind;
            double facing_deg = 0.0;
            if (!(ss >> kind >> light.x >> light.y >> light.head_height >> facing_deg >>
                  light.head_size >> light.phase_offset))
                throw ParseError(path, line_no,
                                 "light expects `kind x y z facing_deg size offset color dur ...`");
            if (kind == "pedestrian") {
                light.kind = LightKind::pedestrian;
            } else if (kind == "vehicle") {
                light.kind = LightKind::vehicle;
            } else {
                throw ParseError(path, line_no, "light kind must be pedestrian|vehicle");
            }
            light.facing = facing_deg * std::numbers::pi / 180.0;
            std::string color;
            double duration;
            while (ss >> color) {
                if (!(ss >> duration) || duration <= 0.0)
                    throw ParseError(path, line_no, "phase duration must be > 0");
                if (color == "red") {
                    light.schedule.push_back({PhaseColor::red, duration});
                } else if (color == "green") {
                    light.schedule.push_back({PhaseColor::green, duration});
                } else {
                    throw ParseError(path, line_no, "phase color must be red|green");
                }
            }
            if (light.schedule.empty())
                throw ParseError(path, line_no, "light needs at least one phase");
            sc.lights.push_back(std::move(light));
        } else if (key == "centerline") {
            double x, y;
            sc.centerline.clear();
            while (ss >> x) {
                if (!(ss >> y)) throw ParseError(path, line_no, "odd number of centerline coordinates");
                sc.centerline.push_back({x, y});
            }
            if (sc.centerline.size() < 2)
                throw ParseError(path, line_no, "centerline needs at least 2 points");
        } else if (key == "crossing") {
            CrossingZone zone;
            if (!(ss >> zone.light_index))
                throw ParseError(path, line_no, "crossing expects `light_index polygon...`");
            zone.polygon = parse_polygon(ss, path, line_no);
            sc.crossings.push_back(std::move(zone));
        } else if (key == "pixel_noise") {
            if (!(ss >> sc.pixel_noise) || sc.pixel_noise < 0.0 || sc.pixel_noise > 1.0)
                throw ParseError(path, line_no, "pixel_noise expects a probability");
        } else if (key == "phase_jitter") {
            if (!(ss >> sc.phase_jitter_min >> sc.phase_jitter_max) ||
                sc.phase_jitter_max < sc.phase_jitter_min)
                throw ParseError(path, line_no, "phase_jitter expects `min max` seconds");
        } else {
            throw ParseError(path, line_no, "unknown record `" + key + "`");
        }
    }
    if (!saw_version) throw ParseError(path, line_no, "empty scenario file");

    try {
        sc.validate(palette);
    } catch (const InvalidInput& e) {
        throw ParseError(path, line_no, e.what());
    }
    return sc;
}

void Scenario::validate(const ClassPalette& palette) const {
    if (surfaces.empty()) throw InvalidInput("scenario has no surfaces");
    if (camera.width <= 0 || camera.height <= 0)
        throw InvalidInput("camera dimensions must be positive");
    if (!(camera.hfov_deg > 10.0 && camera.hfov_deg < 170.0))
        throw InvalidInput("camera hfov must be in (10, 170) degrees");
    for (const auto& s : surfaces) {
        if (s.class_id < 0 || s.class_id >= palette.size())
            throw InvalidInput("surface class out of palette range");
    }
    for (const auto& light : lights) {
        if (light.schedule.empty()) throw InvalidInput("light without schedule");
        for (const auto& p : light.schedule) {
            if (!(p.duration > 0.0)) throw InvalidInput("phase durations must be > 0");
        }
    }
    for (const auto& zone : crossings) {
        if (zone.light_index < 0 || zone.light_index >= static_cast<int>(lights.size()))
            throw InvalidInput("crossing references a light that does not exist");
        if (lights[zone.light_index].kind != LightKind::pedestrian)
            throw InvalidInput("crossing must be governed by a pedestrian light");
    }
}

// ---------------------------------------------------------------------------
// Run scoring
// ---------------------------------------------------------------------------

Metrics score(const std::vector<StepRecord>& records, const Scenario& scenario,
              const ClassPalette& palette, const std::vector<double>& phase_jitter) {
    Metrics m;
    m.total_steps = static_cast<std::int64_t>(records.size());
    if (records.empty()) {
        m.rms_deviation = std::numeric_limits<double>::quiet_NaN();
        m.max_deviation = std::numeric_limits<double>::quiet_NaN();
        return m;
    }

    double sum_sq = 0.0;
    double max_dev = 0.0;
    std::int64_t on_walkable = 0;
    std::vector<bool> was_inside(scenario.crossings.size(), false);

    for (const auto& rec : records) {
        const Vec2 pos{rec.x, rec.y};

        if (!scenario.centerline.empty()) {
            const double dev = distance_to_polyline(pos, scenario.centerline);
            sum_sq += dev * dev;
            max_dev = std::max(max_dev, dev);
        }

        const int cls = scenario.class_at(pos);
        if (palette.entry(cls).walkable) ++on_walkable;

        for (const auto& obs : scenario.obstacles) {
            if (obs.bbox.contains(pos) && point_in_polygon(pos, obs.polygon)) {
                ++m.obstacle_hits;
                break;
            }
        }

        for (std::size_t i = 0; i < scenario.crossings.size(); ++i) {
            const auto& zone = scenario.crossings[i];
            const bool inside = point_in_polygon(pos, zone.polygon);
            if (inside && !was_inside[i]) {
                const auto& light = scenario.lights[zone.light_index];
                if (light_color_at(light, rec.time, phase_jitter[zone.light_index]) ==
                    PhaseColor::red) {
                    ++m.red_light_violations;
                }
            }
            was_inside[i] = inside;
        }

        if (!m.goal_reached && !scenario.goal.empty() && point_in_polygon(pos, scenario.goal)) {
            m.goal_reached = true;
            m.steps_to_goal = rec.frame_index;
        }
    }

    if (scenario.centerline.empty()) {
        m.rms_deviation = std::numeric_limits<double>::quiet_NaN();
        m.max_deviation = std::numeric_limits<double>::quiet_NaN();
    } else {
        m.rms_deviation = std::sqrt(sum_sq / static_cast<double>(records.size()));
        m.max_deviation = max_dev;
    }
    m.walkable_fraction = static_cast<double>(on_walkable) / static_cast<double>(records.size());
    return m;
}

}  // namespace pathguide
