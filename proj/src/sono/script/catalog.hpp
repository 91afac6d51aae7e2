#pragma once

#include "sono/script/ast.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace sono::script {

enum class Builtin {
    Clamp,
    Lerp,
    Abs,
    Floor,
    Ceil,
    Round,
    Sqrt,
    Min,
    Max,
    Pow,
    Sin,
    Cos,
    Atan2,
    Vec2,
    Rgb,
    Rgb255,
    Hsv,
    Len,
    Push,
};

struct BuiltinSpec {
    Builtin id;
    std::string_view name;
    int min_args;
    int max_args;
};

std::span<const BuiltinSpec> builtins();
const BuiltinSpec* find_builtin(std::string_view name);

enum class Primitive { Rect, Disc, Ring, Arc, Line, Polyline, Polygon, Triangle, RegularPolygon };

struct PrimitiveSpec {
    Primitive id;
    std::string_view name;
    std::span<const Type> params;
    std::span<const std::string_view> param_names;
};

std::span<const PrimitiveSpec> primitives();
const PrimitiveSpec* find_primitive(std::string_view name);

struct HandlerSpec {
    HandlerKind kind;
    std::string_view name;
    std::span<const std::string_view> params;
    std::span<const Type> param_types;
};

std::span<const HandlerSpec> handlers();
const HandlerSpec* find_handler(std::string_view name);

/// Named constants (pi, tau).
std::optional<double> find_constant(std::string_view name, int* index = nullptr);
double constant_value(int index);

} // namespace sono::script
