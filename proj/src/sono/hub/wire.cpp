#include "sono/hub/wire.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>

namespace sono::hub {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 6> kPhases = {"enhance", "generate", "compile", "check", "done", "failed"};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* name)
{
    auto it = j.find(name);
    if (it == j.end())
        throw ProtocolError(std::string("missing field '") + name + "'");
    return *it;
}

std::string get_string(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_string())
        throw ProtocolError(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_boolean())
        throw ProtocolError(std::string("field '") + name + "' must be a boolean");
    return v.get<bool>();
}

double get_number(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number())
        throw ProtocolError(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

std::uint64_t get_count(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ProtocolError(std::string("field '") + name + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::int64_t get_int(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number_integer())
        throw ProtocolError(std::string("field '") + name + "' must be an integer");
    return v.get<std::int64_t>();
}

const json& get_array(const json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_array())
        throw ProtocolError(std::string("field '") + name + "' must be an array");
    return v;
}

json record_json(const agent::ScriptRecord& r)
{
    return json{{"userPrompt", r.user_prompt}, {"scriptContent", r.script_content}, {"drawUI", r.draw_ui}};
}

} // namespace

FeaturesMsg FeaturesMsg::from(const audio::SoundFeatures& f)
{
    return FeaturesMsg{f.seq, f.timestamp_ms, f.dominant_freq_hz, f.normalized, f.rms};
}

std::string_view message_type(const WireMessage& msg)
{
    return std::visit(overloaded{
                          [](const FeaturesMsg&) { return std::string_view("features"); },
                          [](const FrameMsg&) { return std::string_view("frame"); },
                          [](const ScriptListMsg&) { return std::string_view("script_list"); },
                          [](const AuthorStatusMsg&) { return std::string_view("author_status"); },
                          [](const DiagnosticsMsg&) { return std::string_view("diagnostics"); },
                          [](const ErrorMsg&) { return std::string_view("error"); },
                          [](const AuthorMsg&) { return std::string_view("author"); },
                          [](const SetDrawUiMsg&) { return std::string_view("set_draw_ui"); },
                          [](const ListScriptsMsg&) { return std::string_view("list_scripts"); },
                          [](const SubscribeMsg&) { return std::string_view("subscribe"); },
                      },
                      msg);
}

bool is_client_message(const WireMessage& msg)
{
    return std::holds_alternative<AuthorMsg>(msg) || std::holds_alternative<SetDrawUiMsg>(msg) ||
           std::holds_alternative<ListScriptsMsg>(msg) || std::holds_alternative<SubscribeMsg>(msg);
}

std::string encode(const WireMessage& msg)
{
    json j;
    j["type"] = std::string(message_type(msg));
    std::visit(overloaded{
                   [&](const FeaturesMsg& m) {
                       j["seq"] = m.seq;
                       j["t_ms"] = m.t_ms;
                       j["dominant_hz"] = m.dominant_hz ? json(*m.dominant_hz) : json(nullptr);
                       j["norm"] = m.norm;
                       j["rms"] = m.rms;
                   },
                   [&](const FrameMsg& m) {
                       j["frame_seq"] = m.frame_seq;
                       j["t_ms"] = m.t_ms;
                       json scripts = json::array();
                       for (const auto& s : m.scripts) {
                           json commands = json::array();
                           for (const auto& c : s.commands)
                               commands.push_back(script::to_json(c));
                           scripts.push_back(json{{"title", s.title}, {"commands", std::move(commands)}});
                       }
                       j["scripts"] = std::move(scripts);
                   },
                   [&](const ScriptListMsg& m) {
                       json records = json::array();
                       for (const auto& r : m.records)
                           records.push_back(record_json(r));
                       j["records"] = std::move(records);
                   },
                   [&](const AuthorStatusMsg& m) {
                       j["phase"] = m.phase;
                       j["detail"] = m.detail;
                   },
                   [&](const DiagnosticsMsg& m) {
                       if (m.title)
                           j["title"] = *m.title;
                       json items = json::array();
                       for (const auto& d : m.items)
                           items.push_back(script::to_json(d));
                       j["items"] = std::move(items);
                   },
                   [&](const ErrorMsg& m) { j["detail"] = m.detail; },
                   [&](const AuthorMsg& m) { j["prompt"] = m.prompt; },
                   [&](const SetDrawUiMsg& m) {
                       j["title"] = m.title;
                       j["value"] = m.value;
                   },
                   [&](const ListScriptsMsg&) {},
                   [&](const SubscribeMsg& m) {
                       j["features"] = m.features;
                       j["frames"] = m.frames;
                   },
               },
               msg);
    return j.dump();
}

WireMessage decode(std::string_view payload)
{
    json j;
    try {
        j = json::parse(payload);
    } catch (const json::parse_error& e) {
        throw ProtocolError("payload is not valid JSON (byte " + std::to_string(e.byte) + ")");
    }
    if (!j.is_object())
        throw ProtocolError("message must be a JSON object");
    const std::string type = get_string(j, "type");

    try {
        if (type == "features") {
            FeaturesMsg m;
            m.seq = get_count(j, "seq");
            m.t_ms = get_int(j, "t_ms");
            const auto& hz = field(j, "dominant_hz");
            if (!hz.is_null()) {
                if (!hz.is_number())
                    throw ProtocolError("field 'dominant_hz' must be a number or null");
                m.dominant_hz = hz.get<double>();
            }
            m.norm = get_number(j, "norm");
            m.rms = get_number(j, "rms");
            return m;
        }
        if (type == "frame") {
            FrameMsg m;
            m.frame_seq = get_count(j, "frame_seq");
            m.t_ms = get_int(j, "t_ms");
            for (const auto& s : get_array(j, "scripts")) {
                if (!s.is_object())
                    throw ProtocolError("frame scripts must be objects");
                FrameScript fs;
                fs.title = get_string(s, "title");
                for (const auto& c : get_array(s, "commands"))
                    fs.commands.push_back(script::shape_from_json(c));
                m.scripts.push_back(std::move(fs));
            }
            return m;
        }
        if (type == "script_list") {
            ScriptListMsg m;
            for (const auto& r : get_array(j, "records")) {
                if (!r.is_object())
                    throw ProtocolError("script_list records must be objects");
                m.records.push_back(
                    agent::ScriptRecord{get_string(r, "userPrompt"), get_string(r, "scriptContent"), get_bool(r, "drawUI")});
            }
            return m;
        }
        if (type == "author_status") {
            AuthorStatusMsg m{get_string(j, "phase"), get_string(j, "detail")};
            if (std::find(kPhases.begin(), kPhases.end(), m.phase) == kPhases.end())
                throw ProtocolError("unknown authoring phase '" + m.phase + "'");
            return m;
        }
        if (type == "diagnostics") {
            DiagnosticsMsg m;
            if (j.contains("title")) {
                if (!j["title"].is_string())
                    throw ProtocolError("field 'title' must be a string");
                m.title = j["title"].get<std::string>();
            }
            for (const auto& d : get_array(j, "items"))
                m.items.push_back(script::diagnostic_from_json(d));
            return m;
        }
        if (type == "error")
            return ErrorMsg{get_string(j, "detail")};
        if (type == "author") {
            AuthorMsg m{get_string(j, "prompt")};
            if (m.prompt.find_first_not_of(" \t\r\n") == std::string::npos)
                throw ProtocolError("field 'prompt' must not be empty");
            return m;
        }
        if (type == "set_draw_ui")
            return SetDrawUiMsg{get_string(j, "title"), get_bool(j, "value")};
        if (type == "list_scripts")
            return ListScriptsMsg{};
        if (type == "subscribe")
            return SubscribeMsg{get_bool(j, "features"), get_bool(j, "frames")};
    } catch (const std::invalid_argument& e) {
        throw ProtocolError(type + ": " + e.what());
    } catch (const json::exception& e) {
        throw ProtocolError(type + ": " + e.what());
    }
    throw ProtocolError("unknown message type '" + type + "'");
}

} // namespace sono::hub
