#pragma once

#include "sono/script/ast.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sono::script {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Straight-alpha RGBA; components are always within [0, 1].
struct Color {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double a = 1.0;

    static Color clamped(double r, double g, double b, double a = 1.0);
    friend bool operator==(const Color&, const Color&) = default;
};

struct Value;
using List = std::vector<Value>;

struct Value {
    std::variant<double, bool, std::string, Color, Vec2, List> data;

    Value() : data(0.0) {}
    Value(double v) : data(v) {}
    Value(bool v) : data(v) {}
    Value(std::string v) : data(std::move(v)) {}
    Value(const char* v) : data(std::string(v)) {}
    Value(Color v) : data(v) {}
    Value(Vec2 v) : data(v) {}
    Value(List v) : data(std::move(v)) {}

    Type type() const;

    bool is_number() const { return std::holds_alternative<double>(data); }
    double as_number() const { return std::get<double>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const std::string& as_string() const { return std::get<std::string>(data); }
    const Color& as_color() const { return std::get<Color>(data); }
    const Vec2& as_vec2() const { return std::get<Vec2>(data); }
    const List& as_list() const { return std::get<List>(data); }

    friend bool operator==(const Value&, const Value&) = default;
};

/// Short human-readable rendering for diagnostics and the CLI.
std::string to_display(const Value& v);

} // namespace sono::script
