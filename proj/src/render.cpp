#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pathguide/errors.hpp"
#include "pathguide/rng.hpp"
#include "pathguide/sim.hpp"

namespace pathguide {

namespace {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Camera basis at a drone pose: f is the optical axis (pitched below horizon),
// r the image-u direction, dwn the image-v direction.
struct CameraBasis {
    Vec3 origin;
    Vec3 f, r, dwn;
};

// Scanline fill of the convex hull of projected points (monotone chain hull,
// half-open horizontal rule).
void fill_convex_hull(SegmentationFrame& frame, std::vector<Projection> pts, int class_id) {
    std::sort(pts.begin(), pts.end(), [](const Projection& a, const Projection& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    auto cross = [](const Projection& o, const Projection& a, const Projection& b) {
        return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
    };
    std::vector<Projection> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k > 1 ? k - 1 : k);
    if (hull.size() < 3) return;

    double v_min = hull[0].v, v_max = hull[0].v;
    for (const auto& p : hull) {
        v_min = std::min(v_min, p.v);
        v_max = std::max(v_max, p.v);
    }
    const int y0 = std::max(0, static_cast<int>(std::ceil(v_min)));
    const int y1 = std::min(frame.height - 1, static_cast<int>(std::floor(v_max)));
    for (int y = y0; y <= y1; ++y) {
        double u_lo = std::numeric_limits<double>::infinity();
        double u_hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Projection& a = hull[i];
            const Projection& b = hull[(i + 1) % hull.size()];
            if ((a.v <= y && y < b.v) || (b.v <= y && y < a.v)) {
                const double u = a.u + (b.u - a.u) * (y - a.v) / (b.v - a.v);
                u_lo = std::min(u_lo, u);
                u_hi = std::max(u_hi, u);
            }
        }
        if (u_lo > u_hi) continue;
        const int x0 = std::max(0, static_cast<int>(std::ceil(u_lo)));
        const int x1 = std::min(frame.width - 1, static_cast<int>(std::floor(u_hi)));
        for (int x = x0; x <= x1; ++x) frame.set(x, y, class_id);
    }
}

CameraBasis camera_basis(const DroneState& drone, const CameraSpec& camera) {
    const double pitch = camera.pitch_deg * std::numbers::pi / 180.0;
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double ch = std::cos(drone.heading), sh = std::sin(drone.heading);
    CameraBasis basis;
    basis.origin = {drone.x, drone.y, drone.h + camera.mount_offset};
    basis.f = {ch * cp, sh * cp, -sp};
    basis.r = {-sh, ch, 0.0};
    basis.dwn = {-sp * ch, -sp * sh, -cp};
    return basis;
}

}  // namespace

Renderer::Renderer(const Scenario& scenario, std::shared_ptr<const ClassPalette> palette)
    : scenario_(scenario), palette_(std::move(palette)) {
    scenario_.validate(*palette_);
    for (const auto& e : palette_->entries()) {
        if (e.traffic_light) {
            traffic_light_class_ = e.class_id;
            break;
        }
    }

    const int w = scenario_.camera.width;
    const int h = scenario_.camera.height;
    const double hfov = scenario_.camera.hfov_deg * std::numbers::pi / 180.0;
    focal_px_ = (w / 2.0) / std::tan(hfov / 2.0);
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    ray_a_.resize(w);
    for (int u = 0; u < w; ++u) ray_a_[u] = (u - cx) / focal_px_;
    ray_b_.resize(h);
    for (int v = 0; v < h; ++v) ray_b_[v] = (v - cy) / focal_px_;
}

double Renderer::camera_height(const DroneState& drone) const {
    return drone.h + scenario_.camera.mount_offset;
}

std::optional<Projection> Renderer::project(const DroneState& drone, double wx, double wy,
                                            double wz) const {
    const CameraBasis cam = camera_basis(drone, scenario_.camera);
    const Vec3 d{wx - cam.origin.x, wy - cam.origin.y, wz - cam.origin.z};
    const double depth = d.x * cam.f.x + d.y * cam.f.y + d.z * cam.f.z;
    if (depth <= 1e-9) return std::nullopt;
    const double du = d.x * cam.r.x + d.y * cam.r.y + d.z * cam.r.z;
    const double dv = d.x * cam.dwn.x + d.y * cam.dwn.y + d.z * cam.dwn.z;
    Projection p;
    p.u = (scenario_.camera.width - 1) / 2.0 + focal_px_ * du / depth;
    p.v = (scenario_.camera.height - 1) / 2.0 + focal_px_ * dv / depth;
    p.depth = depth;
    return p;
}

SegmentationFrame Renderer::render(const WorldState& world) const {
    const int w = scenario_.camera.width;
    const int h = scenario_.camera.height;
    SegmentationFrame frame = make_frame(w, h, palette_, 0, world.step_index);

    const CameraBasis cam = camera_basis(world.drone, scenario_.camera);

    // Ground pass. With r.z == 0 the ray's z-slope depends on the row only, so
    // each row maps to a fixed ground depth and the hit point is linear in a.
    for (int v = 0; v < h; ++v) {
        const double b = ray_b_[v];
        const double dz = cam.f.z + b * cam.dwn.z;
        if (dz >= -1e-12) continue;  // at or above the horizon
        const double t = -cam.origin.z / dz;
        if (!(t > 0.0) || !std::isfinite(t)) continue;
        const double base_x = cam.origin.x + t * (cam.f.x + b * cam.dwn.x);
        const double base_y = cam.origin.y + t * (cam.f.y + b * cam.dwn.y);
        const double step_x = t * cam.r.x;
        const double step_y = t * cam.r.y;
        std::uint8_t* row = frame.classes.data() + static_cast<std::size_t>(v) * w;
        for (int u = 0; u < w; ++u) {
            const Vec2 hit{base_x + step_x * ray_a_[u], base_y + step_y * ray_a_[u]};
            row[u] = static_cast<std::uint8_t>(scenario_.class_at(hit));
        }
    }

    // Upright geometry (obstacle prisms and light heads), far to near so closer
    // bodies overwrite.
    struct Billboard {
        double depth;
        bool is_light;
        std::size_t index;
    };
    std::vector<Billboard> order;
    for (std::size_t i = 0; i < scenario_.obstacles.size(); ++i) {
        const auto& obs = scenario_.obstacles[i];
        if (obs.height <= 0.0 || obs.polygon.empty()) continue;
        Vec2 center{0.0, 0.0};
        for (const auto& p : obs.polygon) center = center + p;
        center = center * (1.0 / obs.polygon.size());
        auto proj = project(world.drone, center.x, center.y, obs.height / 2.0);
        if (proj) order.push_back({proj->depth, false, i});
    }
    for (std::size_t i = 0; i < scenario_.lights.size(); ++i) {
        const auto& light = scenario_.lights[i];
        auto proj = project(world.drone, light.x, light.y, light.head_height);
        if (proj) order.push_back({proj->depth, true, i});
    }
    std::sort(order.begin(), order.end(),
              [](const Billboard& a, const Billboard& b) { return a.depth > b.depth; });

    for (const auto& item : order) {
        if (item.is_light) {
            const auto& light = scenario_.lights[item.index];
            const auto proj = *project(world.drone, light.x, light.y, light.head_height);
            const double radius = focal_px_ * (light.head_size / 2.0) / proj.depth;
            if (radius < 0.5) continue;
            const int u0 = std::max(0, static_cast<int>(std::floor(proj.u - radius)));
            const int u1 = std::min(w - 1, static_cast<int>(std::ceil(proj.u + radius)));
            const int v0 = std::max(0, static_cast<int>(std::floor(proj.v - radius)));
            const int v1 = std::min(h - 1, static_cast<int>(std::ceil(proj.v + radius)));
            const double r_sq = radius * radius;
            for (int v = v0; v <= v1; ++v) {
                for (int u = u0; u <= u1; ++u) {
                    const double du = u - proj.u;
                    const double dv = v - proj.v;
                    if (du * du + dv * dv <= r_sq) {
                        frame.set(u, v, traffic_light_class_);
                    }
                }
            }
        } else {
            const auto& obs = scenario_.obstacles[item.index];
            // Project the prism's base and top rings and fill the convex hull.
            std::vector<Projection> pts;
            pts.reserve(obs.polygon.size() * 2);
            for (const auto& p : obs.polygon) {
                if (auto lo = project(world.drone, p.x, p.y, 0.0)) pts.push_back(*lo);
                if (auto hi = project(world.drone, p.x, p.y, obs.height)) pts.push_back(*hi);
            }
            if (pts.size() < 3) continue;
            fill_convex_hull(frame, pts, obs.class_id);
        }
    }

    // Optional per-pixel class flip noise, seeded per frame.
    if (scenario_.pixel_noise > 0.0) {
        std::mt19937 rng(mix_seed(scenario_.seed, 0x70786c00u + static_cast<std::uint64_t>(
                                                                    world.step_index)));
        const int n_classes = palette_->size();
        for (auto& cell : frame.classes) {
            if (uniform01(rng) < scenario_.pixel_noise) {
                cell = static_cast<std::uint8_t>(uniform01(rng) * n_classes);
            }
        }
    }

    return frame;
}

OracleClassifier::OracleClassifier(const Scenario& scenario, const Renderer& renderer,
                                   double noise, std::uint32_t seed)
    : scenario_(scenario), renderer_(renderer), noise_(noise),
      rng_(mix_seed(seed, 0x6f72636cu)) {}

void OracleClassifier::bind(const WorldState& world, const std::vector<double>& phase_jitter) {
    world_ = &world;
    phase_jitter_ = &phase_jitter;
}

LightClass OracleClassifier::classify(const RgbImage& patch, const LightPatch& bbox) {
    if (world_ == nullptr) throw InvalidInput("OracleClassifier: no world bound");

    // Ground truth: the visible light whose projected center is nearest to the
    // patch center.
    const double pu = (bbox.x_min + bbox.x_max) / 2.0;
    const double pv = (bbox.y_min + bbox.y_max) / 2.0;
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scenario_.lights.size(); ++i) {
        const auto& light = scenario_.lights[i];
        const auto proj =
            renderer_.project(world_->drone, light.x, light.y, light.head_height);
        if (!proj) continue;
        const double d = std::hypot(proj->u - pu, proj->v - pv);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(i);
        }
    }

    LightClass truth = LightClass::others;
    if (best >= 0) {
        const auto& light = scenario_.lights[best];
        // Back/side-facing heads read as `others`, same as an unlit box.
        const double to_cam_x = world_->drone.x - light.x;
        const double to_cam_y = world_->drone.y - light.y;
        const double norm = std::hypot(to_cam_x, to_cam_y);
        const double cos_view = norm > 1e-9
                                    ? (to_cam_x * std::cos(light.facing) +
                                       to_cam_y * std::sin(light.facing)) / norm
                                    : 1.0;
        if (cos_view >= std::cos(60.0 * std::numbers::pi / 180.0)) {
            const PhaseColor color =
                light_color_at(light, world_->drone.time, (*phase_jitter_)[best]);
            if (light.kind == LightKind::pedestrian) {
                truth = color == PhaseColor::red ? LightClass::pedestrian_red
                                                 : LightClass::pedestrian_green;
            } else {
                truth = color == PhaseColor::red ? LightClass::vehicle_red
                                                 : LightClass::vehicle_green;
            }
        }
    }

    if (noise_ > 0.0 && uniform01(rng_) < noise_) {
        // Substitute a uniform draw over the other four classes.
        constexpr LightClass all[5] = {LightClass::pedestrian_red, LightClass::pedestrian_green,
                                       LightClass::vehicle_red, LightClass::vehicle_green,
                                       LightClass::others};
        LightClass wrong[4];
        int n = 0;
        for (LightClass c : all) {
            if (c != truth) wrong[n++] = c;
        }
        const int pick = std::min(3, static_cast<int>(uniform01(rng_) * 4.0));
        return wrong[pick];
    }
    return truth;
}

}  // namespace pathguide
