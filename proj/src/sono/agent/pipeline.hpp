#pragma once

#include "sono/agent/registry.hpp"
#include "sono/agent/templates.hpp"
#include "sono/agent/transport.hpp"
#include "sono/script/compile.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sono::agent {

enum class Phase { Enhance, Generate, Compile, Check, Done, Failed };

std::string_view phase_name(Phase phase);

/// Progress hook; called on the authoring thread.
using PhaseCallback = std::function<void(Phase, const std::string& detail)>;

struct TranscriptEntry {
    std::string agent;
    std::string request_digest;    // SHA-256 of the rendered user message
    std::string response_digest;   // SHA-256 of the raw reply
    std::vector<script::Diagnostic> diagnostics;   // compile result of this reply (generate/check)
};

struct AuthoringResult {
    bool success = false;
    std::shared_ptr<const script::CompiledScript> script;
    script::ScriptSource source;
    int iterations_used = 0;
    std::vector<TranscriptEntry> transcript;
    std::vector<script::Diagnostic> diagnostics;   // final compile diagnostics
    std::string error;                             // set when a transport or reply problem stopped the run
    double wall_time_ms = 0.0;
};

/// The enhance, generate and check agents plus the compile-repair loop.
class AgentPipeline {
public:
    AgentPipeline(Transport& transport, AgentConfig config);

    std::string enhance_prompt(std::string_view user_prompt);
    script::ScriptSource generate_script(const AuthoringContext& ctx);
    script::ScriptSource check_script(const script::ScriptSource& source,
                                      const std::vector<script::Diagnostic>& diagnostics, std::string_view user_prompt);

    /// Never throws for agent or script problems; a failed run leaves the
    /// registry untouched. On success the script is upserted with drawUI on.
    AuthoringResult author(std::string_view prompt, ScriptRegistry& registry, const PhaseCallback& on_phase = {});

    /// Compile plus instantiation: a default that faults at runtime counts as
    /// an error the checker should see.
    static script::CompileResult compile_and_probe(const script::ScriptSource& source);

private:
    std::string exchange(std::string_view agent, const ChatPrompt& prompt);

    Transport& transport_;
    AgentConfig config_;
    std::vector<TranscriptEntry>* transcript_ = nullptr;
};

} // namespace sono::agent
