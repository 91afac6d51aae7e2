#pragma once

#include "sono/agent/registry.hpp"
#include "sono/audio/features.hpp"
#include "sono/script/shapes.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sono::hub {

// Server to client.
struct FeaturesMsg {
    std::uint64_t seq = 0;
    std::int64_t t_ms = 0;
    std::optional<double> dominant_hz;
    double norm = 0.0;
    double rms = 0.0;

    static FeaturesMsg from(const audio::SoundFeatures& f);
    friend bool operator==(const FeaturesMsg&, const FeaturesMsg&) = default;
};

struct FrameScript {
    std::string title;
    std::vector<script::ShapeCommand> commands;
    friend bool operator==(const FrameScript&, const FrameScript&) = default;
};

struct FrameMsg {
    std::uint64_t frame_seq = 0;
    std::int64_t t_ms = 0;
    std::vector<FrameScript> scripts;
    friend bool operator==(const FrameMsg&, const FrameMsg&) = default;
};

struct ScriptListMsg {
    std::vector<agent::ScriptRecord> records;
    friend bool operator==(const ScriptListMsg&, const ScriptListMsg&) = default;
};

/// phase is one of enhance, generate, compile, check, done, failed.
struct AuthorStatusMsg {
    std::string phase;
    std::string detail;
    friend bool operator==(const AuthorStatusMsg&, const AuthorStatusMsg&) = default;
};

struct DiagnosticsMsg {
    std::optional<std::string> title;
    std::vector<script::Diagnostic> items;
    friend bool operator==(const DiagnosticsMsg&, const DiagnosticsMsg&) = default;
};

/// Reply to a payload the server could not accept.
struct ErrorMsg {
    std::string detail;
    friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

// Client to server.
struct AuthorMsg {
    std::string prompt;
    friend bool operator==(const AuthorMsg&, const AuthorMsg&) = default;
};

struct SetDrawUiMsg {
    std::string title;
    bool value = true;
    friend bool operator==(const SetDrawUiMsg&, const SetDrawUiMsg&) = default;
};

struct ListScriptsMsg {
    friend bool operator==(const ListScriptsMsg&, const ListScriptsMsg&) = default;
};

/// Chooses which broadcast streams reach this client. Both are on by default.
struct SubscribeMsg {
    bool features = true;
    bool frames = true;
    friend bool operator==(const SubscribeMsg&, const SubscribeMsg&) = default;
};

using WireMessage = std::variant<FeaturesMsg, FrameMsg, ScriptListMsg, AuthorStatusMsg, DiagnosticsMsg, ErrorMsg,
                                 AuthorMsg, SetDrawUiMsg, ListScriptsMsg, SubscribeMsg>;

/// Raised by decode; the text is sent back to the client in an error message.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view message_type(const WireMessage& msg);
bool is_client_message(const WireMessage& msg);

/// Compact JSON text, one message per WebSocket text frame.
std::string encode(const WireMessage& msg);
WireMessage decode(std::string_view payload);

} // namespace sono::hub
