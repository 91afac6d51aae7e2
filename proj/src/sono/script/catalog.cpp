#include "sono/script/catalog.hpp"

#include <numbers>

namespace sono::script {
namespace {

constexpr BuiltinSpec kBuiltins[] = {
    {Builtin::Clamp, "clamp", 3, 3}, {Builtin::Lerp, "lerp", 3, 3},   {Builtin::Abs, "abs", 1, 1},
    {Builtin::Floor, "floor", 1, 1}, {Builtin::Ceil, "ceil", 1, 1},   {Builtin::Round, "round", 1, 1},
    {Builtin::Sqrt, "sqrt", 1, 1},   {Builtin::Min, "min", 2, 2},     {Builtin::Max, "max", 2, 2},
    {Builtin::Pow, "pow", 2, 2},     {Builtin::Sin, "sin", 1, 1},     {Builtin::Cos, "cos", 1, 1},
    {Builtin::Atan2, "atan2", 2, 2}, {Builtin::Vec2, "vec2", 2, 2},   {Builtin::Rgb, "rgb", 3, 4},
    {Builtin::Rgb255, "rgb255", 3, 4}, {Builtin::Hsv, "hsv", 3, 4},   {Builtin::Len, "len", 1, 1},
    {Builtin::Push, "push", 2, 2},
};

constexpr Type kRect[] = {Type::Vec2, Type::Number, Type::Number, Type::Number, Type::Color};
constexpr std::string_view kRectNames[] = {"center", "width", "height", "corner_radius", "color"};
constexpr Type kDisc[] = {Type::Vec2, Type::Number, Type::Color};
constexpr std::string_view kDiscNames[] = {"center", "radius", "color"};
constexpr Type kRing[] = {Type::Vec2, Type::Number, Type::Number, Type::Color};
constexpr std::string_view kRingNames[] = {"center", "radius", "thickness", "color"};
constexpr Type kArc[] = {Type::Vec2, Type::Number, Type::Number, Type::Number, Type::Number, Type::Color};
constexpr std::string_view kArcNames[] = {"center", "radius", "thickness", "angle_start", "angle_end", "color"};
constexpr Type kLine[] = {Type::Vec2, Type::Vec2, Type::Number, Type::Color};
constexpr std::string_view kLineNames[] = {"a", "b", "thickness", "color"};
constexpr Type kPolyline[] = {Type::List, Type::Number, Type::Color};
constexpr std::string_view kPolylineNames[] = {"points", "thickness", "color"};
constexpr Type kPolygon[] = {Type::List, Type::Color};
constexpr std::string_view kPolygonNames[] = {"points", "color"};
constexpr Type kTriangle[] = {Type::Vec2, Type::Vec2, Type::Vec2, Type::Color};
constexpr std::string_view kTriangleNames[] = {"a", "b", "c", "color"};
constexpr Type kRegular[] = {Type::Vec2, Type::Number, Type::Number, Type::Number, Type::Color};
constexpr std::string_view kRegularNames[] = {"center", "sides", "radius", "rotation", "color"};

const PrimitiveSpec kPrimitives[] = {
    {Primitive::Rect, "rect", kRect, kRectNames},
    {Primitive::Disc, "disc", kDisc, kDiscNames},
    {Primitive::Ring, "ring", kRing, kRingNames},
    {Primitive::Arc, "arc", kArc, kArcNames},
    {Primitive::Line, "line", kLine, kLineNames},
    {Primitive::Polyline, "polyline", kPolyline, kPolylineNames},
    {Primitive::Polygon, "polygon", kPolygon, kPolygonNames},
    {Primitive::Triangle, "triangle", kTriangle, kTriangleNames},
    {Primitive::RegularPolygon, "regular_polygon", kRegular, kRegularNames},
};

constexpr std::string_view kOnSoundParams[] = {"classification", "frequency", "distance"};
constexpr Type kOnSoundTypes[] = {Type::String, Type::Number, Type::Number};
constexpr std::string_view kUpdateParams[] = {"dt"};
constexpr Type kUpdateTypes[] = {Type::Number};

const HandlerSpec kHandlers[] = {
    {HandlerKind::OnSound, "on_sound", kOnSoundParams, kOnSoundTypes},
    {HandlerKind::Update, "update", kUpdateParams, kUpdateTypes},
    {HandlerKind::Draw, "draw", {}, {}},
};

struct ConstantSpec {
    std::string_view name;
    double value;
};
constexpr ConstantSpec kConstants[] = {{"pi", std::numbers::pi}, {"tau", 2.0 * std::numbers::pi}};

} // namespace

std::span<const BuiltinSpec> builtins()
{
    return kBuiltins;
}

const BuiltinSpec* find_builtin(std::string_view name)
{
    for (const auto& b : kBuiltins) {
        if (b.name == name)
            return &b;
    }
    return nullptr;
}

std::span<const PrimitiveSpec> primitives()
{
    return kPrimitives;
}

const PrimitiveSpec* find_primitive(std::string_view name)
{
    for (const auto& p : kPrimitives) {
        if (p.name == name)
            return &p;
    }
    return nullptr;
}

std::span<const HandlerSpec> handlers()
{
    return kHandlers;
}

const HandlerSpec* find_handler(std::string_view name)
{
    for (const auto& h : kHandlers) {
        if (h.name == name)
            return &h;
    }
    return nullptr;
}

std::optional<double> find_constant(std::string_view name, int* index)
{
    for (std::size_t i = 0; i < std::size(kConstants); ++i) {
        if (kConstants[i].name == name) {
            if (index)
                *index = static_cast<int>(i);
            return kConstants[i].value;
        }
    }
    return std::nullopt;
}

double constant_value(int index)
{
    return kConstants[static_cast<std::size_t>(index)].value;
}

} // namespace sono::script
