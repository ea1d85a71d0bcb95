#include "pathguide/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace pathguide {

Aabb Aabb::of(const Polygon& poly) {
    Aabb box;
    if (poly.empty()) return box;
    box.min_x = box.max_x = poly[0].x;
    box.min_y = box.max_y = poly[0].y;
    for (const auto& p : poly) {
        box.min_x = std::min(box.min_x, p.x);
        box.max_x = std::max(box.max_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses) {
            const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

namespace {

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.dot(ab);
    if (len_sq <= 0.0) return (p - a).norm();
    double t = (p - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& polyline) {
    if (polyline.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (polyline.size() == 1) return (p - polyline[0]).norm();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        best = std::min(best, distance_to_segment(p, polyline[i], polyline[i + 1]));
    }
    return best;
}

double normalize_angle(double radians) {
    const double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(radians, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

}  // namespace pathguide
