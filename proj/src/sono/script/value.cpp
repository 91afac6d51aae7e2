#include "sono/script/value.hpp"

#include <algorithm>
#include <cstdio>

namespace sono::script {

std::string_view type_name(Type t)
{
    switch (t) {
    case Type::Any: return "any";
    case Type::Void: return "nothing";
    case Type::Number: return "number";
    case Type::Bool: return "bool";
    case Type::String: return "string";
    case Type::Color: return "color";
    case Type::Vec2: return "vec2";
    case Type::List: return "list";
    }
    return "?";
}

Color Color::clamped(double r, double g, double b, double a)
{
    return Color{std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0), std::clamp(b, 0.0, 1.0), std::clamp(a, 0.0, 1.0)};
}

Type Value::type() const
{
    switch (data.index()) {
    case 0: return Type::Number;
    case 1: return Type::Bool;
    case 2: return Type::String;
    case 3: return Type::Color;
    case 4: return Type::Vec2;
    default: return Type::List;
    }
}

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::string to_display(const Value& v)
{
    switch (v.type()) {
    case Type::Number: return num(v.as_number());
    case Type::Bool: return v.as_bool() ? "true" : "false";
    case Type::String: return "\"" + v.as_string() + "\"";
    case Type::Color: {
        const auto& c = v.as_color();
        return "rgb(" + num(c.r) + ", " + num(c.g) + ", " + num(c.b) + ", " + num(c.a) + ")";
    }
    case Type::Vec2: return "vec2(" + num(v.as_vec2().x) + ", " + num(v.as_vec2().y) + ")";
    case Type::List: {
        std::string out = "[";
        const auto& items = v.as_list();
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i > 0)
                out += ", ";
            if (i == 8) {
                out += "... " + std::to_string(items.size() - 8) + " more";
                break;
            }
            out += to_display(items[i]);
        }
        return out + "]";
    }
    default: return "?";
    }
}

} // namespace sono::script
