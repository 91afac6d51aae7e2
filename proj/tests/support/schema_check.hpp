#pragma once

// Validator for the JSON Schema subset docs/wire_schema.json uses: $ref into
// $defs, oneOf, type, const, enum, required, properties,
// additionalProperties: false, items, minItems/maxItems, minimum/maximum.
// Returns an empty string when the instance conforms.

#include <json.hpp>

#include <string>

namespace sono::test {

class SchemaCheck {
public:
    explicit SchemaCheck(nlohmann::json schema) : root_(std::move(schema)) {}

    std::string validate(const nlohmann::json& instance) const { return check(root_, instance, "$"); }

private:
    static bool has_type(const nlohmann::json& v, const std::string& t)
    {
        if (t == "object")
            return v.is_object();
        if (t == "array")
            return v.is_array();
        if (t == "string")
            return v.is_string();
        if (t == "boolean")
            return v.is_boolean();
        if (t == "null")
            return v.is_null();
        if (t == "integer")
            return v.is_number_integer();
        if (t == "number")
            return v.is_number();
        return false;
    }

    const nlohmann::json& resolve(const std::string& ref) const
    {
        const std::string prefix = "#/$defs/";
        if (ref.rfind(prefix, 0) != 0)
            throw std::runtime_error("unsupported $ref " + ref);
        return root_.at("$defs").at(ref.substr(prefix.size()));
    }

    std::string check(const nlohmann::json& s, const nlohmann::json& v, const std::string& at) const
    {
        if (s.contains("$ref"))
            return check(resolve(s["$ref"].get<std::string>()), v, at);
        if (s.contains("type")) {
            bool ok = false;
            if (s["type"].is_array()) {
                for (const auto& t : s["type"])
                    ok = ok || has_type(v, t.get<std::string>());
            } else {
                ok = has_type(v, s["type"].get<std::string>());
            }
            if (!ok)
                return at + ": wrong type";
        }
        if (s.contains("const") && v != s["const"])
            return at + ": expected " + s["const"].dump();
        if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
            return at + ": " + v.dump() + " not in enum";
        if (v.is_number()) {
            if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
                return at + ": below minimum";
            if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>())
                return at + ": above maximum";
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
                return at + ": too few items";
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
                return at + ": too many items";
            if (s.contains("items")) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (auto e = check(s["items"], v[i], at + "[" + std::to_string(i) + "]"); !e.empty())
                        return e;
                }
            }
        }
        if (v.is_object()) {
            if (s.contains("required")) {
                for (const auto& r : s["required"]) {
                    if (!v.contains(r.get<std::string>()))
                        return at + ": missing " + r.get<std::string>();
                }
            }
            const auto props = s.value("properties", nlohmann::json::object());
            for (const auto& [key, value] : v.items()) {
                if (props.contains(key)) {
                    if (auto e = check(props[key], value, at + "." + key); !e.empty())
                        return e;
                } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
                    return at + ": unexpected property " + key;
                }
            }
        }
        if (s.contains("oneOf")) {
            int matches = 0;
            std::string last;
            for (const auto& option : s["oneOf"]) {
                auto e = check(option, v, at);
                if (e.empty())
                    ++matches;
                else
                    last = e;
            }
            if (matches != 1)
                return at + ": matches " + std::to_string(matches) + " alternatives" +
                       (matches == 0 ? " (" + last + ")" : "");
        }
        return {};
    }

    nlohmann::json root_;
};

} // namespace sono::test
