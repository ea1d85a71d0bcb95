#pragma once

#include <cmath>
#include <vector>

namespace pathguide {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

using Polygon = std::vector<Vec2>;

struct Aabb {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

    static Aabb of(const Polygon& poly);
    bool contains(const Vec2& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

// Even-odd rule; points exactly on an edge count as inside on the lower/left side.
bool point_in_polygon(const Vec2& p, const Polygon& poly);

// Shortest distance from p to the segment chain through the given points.
double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& polyline);

// Normalizes an angle to (-pi, pi].
double normalize_angle(double radians);

}  // namespace pathguide
