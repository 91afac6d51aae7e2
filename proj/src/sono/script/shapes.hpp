#pragma once

#include "sono/script/value.hpp"

#include <json.hpp>

#include <string_view>
#include <variant>
#include <vector>

namespace sono::script {

namespace shape {

struct Rect {
    Vec2 center;
    double width = 0.0;
    double height = 0.0;
    double corner_radius = 0.0;
    Color color;
    friend bool operator==(const Rect&, const Rect&) = default;
};
struct Disc {
    Vec2 center;
    double radius = 0.0;
    Color color;
    friend bool operator==(const Disc&, const Disc&) = default;
};
struct Ring {
    Vec2 center;
    double radius = 0.0;
    double thickness = 0.0;
    Color color;
    friend bool operator==(const Ring&, const Ring&) = default;
};
struct Arc {
    Vec2 center;
    double radius = 0.0;
    double thickness = 0.0;
    double angle_start = 0.0;
    double angle_end = 0.0;
    Color color;
    friend bool operator==(const Arc&, const Arc&) = default;
};
struct Line {
    Vec2 a;
    Vec2 b;
    double thickness = 0.0;
    Color color;
    friend bool operator==(const Line&, const Line&) = default;
};
struct Polyline {
    std::vector<Vec2> points;
    double thickness = 0.0;
    Color color;
    friend bool operator==(const Polyline&, const Polyline&) = default;
};
struct Polygon {
    std::vector<Vec2> points;
    Color color;
    friend bool operator==(const Polygon&, const Polygon&) = default;
};
struct Triangle {
    Vec2 a;
    Vec2 b;
    Vec2 c;
    Color color;
    friend bool operator==(const Triangle&, const Triangle&) = default;
};
struct RegularPolygon {
    Vec2 center;
    int sides = 3;
    double radius = 0.0;
    double rotation = 0.0;
    Color color;
    friend bool operator==(const RegularPolygon&, const RegularPolygon&) = default;
};

} // namespace shape

/// One immediate-mode draw primitive in scene units (z fixed at 0).
using ShapeCommand = std::variant<shape::Rect, shape::Disc, shape::Ring, shape::Arc, shape::Line, shape::Polyline,
                                  shape::Polygon, shape::Triangle, shape::RegularPolygon>;

/// Wire name of the command ("rect", "disc", ...).
std::string_view kind_name(const ShapeCommand& cmd);

nlohmann::json to_json(const ShapeCommand& cmd);
/// Throws std::invalid_argument naming the offending field.
ShapeCommand shape_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Diagnostic& d);
Diagnostic diagnostic_from_json(const nlohmann::json& j);

} // namespace sono::script
