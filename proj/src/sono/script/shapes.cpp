#include "sono/script/shapes.hpp"

#include <stdexcept>
#include <string>

namespace sono::script {
namespace {

using nlohmann::json;

json vec(const Vec2& v)
{
    return json::array({v.x, v.y});
}

json color(const Color& c)
{
    return json::array({c.r, c.g, c.b, c.a});
}

json points(const std::vector<Vec2>& pts)
{
    json out = json::array();
    for (const auto& p : pts)
        out.push_back(vec(p));
    return out;
}

const json& field(const json& j, const char* name)
{
    auto it = j.find(name);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    return *it;
}

double number(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number())
        throw std::invalid_argument(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

Vec2 read_vec(const json& v, const char* name)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw std::invalid_argument(std::string("field '") + name + "' must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

Vec2 vec_field(const json& j, const char* name)
{
    return read_vec(field(j, name), name);
}

Color color_field(const json& j)
{
    const auto& v = field(j, "color");
    if (!v.is_array() || v.size() != 4)
        throw std::invalid_argument("field 'color' must be [r, g, b, a]");
    for (const auto& c : v) {
        if (!c.is_number())
            throw std::invalid_argument("field 'color' must be [r, g, b, a]");
    }
    return Color::clamped(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>());
}

std::vector<Vec2> points_field(const json& j)
{
    const auto& v = field(j, "points");
    if (!v.is_array())
        throw std::invalid_argument("field 'points' must be a list of [x, y]");
    std::vector<Vec2> out;
    for (const auto& p : v)
        out.push_back(read_vec(p, "points"));
    return out;
}

} // namespace

std::string_view kind_name(const ShapeCommand& cmd)
{
    constexpr std::string_view names[] = {"rect",     "disc",    "ring",     "arc",            "line",
                                          "polyline", "polygon", "triangle", "regular_polygon"};
    return names[cmd.index()];
}

json to_json(const ShapeCommand& cmd)
{
    json j;
    j["kind"] = std::string(kind_name(cmd));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, shape::Rect>) {
                j["center"] = vec(s.center);
                j["width"] = s.width;
                j["height"] = s.height;
                j["corner_radius"] = s.corner_radius;
            } else if constexpr (std::is_same_v<T, shape::Disc>) {
                j["center"] = vec(s.center);
                j["radius"] = s.radius;
            } else if constexpr (std::is_same_v<T, shape::Ring>) {
                j["center"] = vec(s.center);
                j["radius"] = s.radius;
                j["thickness"] = s.thickness;
            } else if constexpr (std::is_same_v<T, shape::Arc>) {
                j["center"] = vec(s.center);
                j["radius"] = s.radius;
                j["thickness"] = s.thickness;
                j["angle_start"] = s.angle_start;
                j["angle_end"] = s.angle_end;
            } else if constexpr (std::is_same_v<T, shape::Line>) {
                j["a"] = vec(s.a);
                j["b"] = vec(s.b);
                j["thickness"] = s.thickness;
            } else if constexpr (std::is_same_v<T, shape::Polyline>) {
                j["points"] = points(s.points);
                j["thickness"] = s.thickness;
            } else if constexpr (std::is_same_v<T, shape::Polygon>) {
                j["points"] = points(s.points);
            } else if constexpr (std::is_same_v<T, shape::Triangle>) {
                j["a"] = vec(s.a);
                j["b"] = vec(s.b);
                j["c"] = vec(s.c);
            } else if constexpr (std::is_same_v<T, shape::RegularPolygon>) {
                j["center"] = vec(s.center);
                j["sides"] = s.sides;
                j["radius"] = s.radius;
                j["rotation"] = s.rotation;
            }
            j["color"] = color(s.color);
        },
        cmd);
    return j;
}

ShapeCommand shape_from_json(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("shape command must be an object");
    const auto& kind_v = field(j, "kind");
    if (!kind_v.is_string())
        throw std::invalid_argument("field 'kind' must be a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "rect")
        return shape::Rect{vec_field(j, "center"), number(j, "width"), number(j, "height"), number(j, "corner_radius"),
                           color_field(j)};
    if (kind == "disc")
        return shape::Disc{vec_field(j, "center"), number(j, "radius"), color_field(j)};
    if (kind == "ring")
        return shape::Ring{vec_field(j, "center"), number(j, "radius"), number(j, "thickness"), color_field(j)};
    if (kind == "arc")
        return shape::Arc{vec_field(j, "center"), number(j, "radius"),    number(j, "thickness"),
                          number(j, "angle_start"), number(j, "angle_end"), color_field(j)};
    if (kind == "line")
        return shape::Line{vec_field(j, "a"), vec_field(j, "b"), number(j, "thickness"), color_field(j)};
    if (kind == "polyline")
        return shape::Polyline{points_field(j), number(j, "thickness"), color_field(j)};
    if (kind == "polygon")
        return shape::Polygon{points_field(j), color_field(j)};
    if (kind == "triangle")
        return shape::Triangle{vec_field(j, "a"), vec_field(j, "b"), vec_field(j, "c"), color_field(j)};
    if (kind == "regular_polygon") {
        const double sides = number(j, "sides");
        return shape::RegularPolygon{vec_field(j, "center"), static_cast<int>(sides), number(j, "radius"),
                                     number(j, "rotation"), color_field(j)};
    }
    throw std::invalid_argument("unknown shape kind '" + kind + "'");
}

json to_json(const Diagnostic& d)
{
    return json{{"severity", d.is_error() ? "error" : "warning"},
                {"code", std::string(code_name(d.code))},
                {"line", d.pos.line},
                {"col", d.pos.col},
                {"message", d.message}};
}

Diagnostic diagnostic_from_json(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("diagnostic must be an object");
    Diagnostic d;
    const auto& sev = field(j, "severity");
    if (sev == "error")
        d.severity = Severity::Error;
    else if (sev == "warning")
        d.severity = Severity::Warning;
    else
        throw std::invalid_argument("field 'severity' must be \"error\" or \"warning\"");
    const auto& code = field(j, "code");
    if (!code.is_string() || !parse_code(code.get<std::string>(), d.code))
        throw std::invalid_argument("field 'code' is not a known diagnostic code");
    const auto& line = field(j, "line");
    const auto& col = field(j, "col");
    if (!line.is_number_integer() || !col.is_number_integer())
        throw std::invalid_argument("fields 'line' and 'col' must be integers");
    d.pos = {line.get<int>(), col.get<int>()};
    const auto& msg = field(j, "message");
    if (!msg.is_string())
        throw std::invalid_argument("field 'message' must be a string");
    d.message = msg.get<std::string>();
    return d;
}

} // namespace sono::script
