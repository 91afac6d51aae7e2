#include "sono/agent/pipeline.hpp"

#include "sono/agent/digest.hpp"
#include "sono/common/assets.hpp"
#include "sono/common/error.hpp"
#include "sono/script/instance.hpp"

#include <chrono>

namespace sono::agent {
namespace {

std::string summarize(const std::vector<script::Diagnostic>& diags)
{
    std::size_t errors = 0;
    const script::Diagnostic* first = nullptr;
    for (const auto& d : diags) {
        if (!d.is_error())
            continue;
        ++errors;
        if (!first)
            first = &d;
    }
    if (!first)
        return "no errors";
    return std::to_string(errors) + " error(s), first: " + script::format_diagnostic(*first);
}

} // namespace

std::string_view phase_name(Phase phase)
{
    switch (phase) {
    case Phase::Enhance: return "enhance";
    case Phase::Generate: return "generate";
    case Phase::Compile: return "compile";
    case Phase::Check: return "check";
    case Phase::Done: return "done";
    case Phase::Failed: return "failed";
    }
    return "failed";
}

AgentPipeline::AgentPipeline(Transport& transport, AgentConfig config)
    : transport_(transport), config_(std::move(config))
{
    if (config_.max_repair_iterations < 0)
        throw InputError("max_repair_iterations must not be negative");
}

std::string AgentPipeline::exchange(std::string_view agent, const ChatPrompt& prompt)
{
    const ChatRequest request{std::string(agent), prompt.system, prompt.user};
    std::string reply;
    try {
        reply = transport_.complete(request);
    } catch (const TransportError&) {
        reply = transport_.complete(request);
    }
    if (transcript_)
        transcript_->push_back(TranscriptEntry{request.agent, sha256_hex(prompt.user), sha256_hex(reply), {}});
    if (reply.find_first_not_of(" \t\r\n") == std::string::npos)
        throw TransportError("the " + request.agent + " agent returned an empty reply");
    return reply;
}

std::string AgentPipeline::enhance_prompt(std::string_view user_prompt)
{
    return exchange("enhance", enhance_request(user_prompt));
}

script::ScriptSource AgentPipeline::generate_script(const AuthoringContext& ctx)
{
    std::string text = strip_code_fences(exchange("generate", generate_request(ctx)));
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw TransportError("the generate agent returned no script");
    return script::ScriptSource{std::move(text), "agent"};
}

script::ScriptSource AgentPipeline::check_script(const script::ScriptSource& source,
                                                 const std::vector<script::Diagnostic>& diagnostics,
                                                 std::string_view user_prompt)
{
    std::string text = strip_code_fences(exchange("check", check_request(source, diagnostics, user_prompt)));
    return script::ScriptSource{std::move(text), "agent"};
}

script::CompileResult AgentPipeline::compile_and_probe(const script::ScriptSource& source)
{
    auto result = script::compile(source);
    if (!result.ok())
        return result;
    auto probe = script::ScriptInstance::create(result.script);
    if (probe.diagnostic) {
        result.diagnostics.push_back(*probe.diagnostic);
        result.script.reset();
    }
    return result;
}

AuthoringResult AgentPipeline::author(std::string_view prompt, ScriptRegistry& registry, const PhaseCallback& on_phase)
{
    const auto started = std::chrono::steady_clock::now();
    AuthoringResult result;
    transcript_ = &result.transcript;
    auto report = [&](Phase phase, const std::string& detail) {
        if (on_phase)
            on_phase(phase, detail);
    };
    auto record_diagnostics = [&](const std::vector<script::Diagnostic>& diags) {
        if (!result.transcript.empty())
            result.transcript.back().diagnostics = diags;
    };

    try {
        if (prompt.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw InputError("prompt must not be empty");

        report(Phase::Enhance, std::string(prompt));
        AuthoringContext ctx;
        ctx.current_prompt = std::string(prompt);
        ctx.docs = std::string(assets::language_reference());
        if (auto prev = registry.previous()) {
            ctx.previous_prompt = prev->user_prompt;
            ctx.previous_script = script::ScriptSource{prev->script_content, "registry"};
        }
        ctx.enhanced_prompt = enhance_prompt(prompt);

        report(Phase::Generate, "");
        result.source = generate_script(ctx);

        report(Phase::Compile, "");
        auto compiled = compile_and_probe(result.source);
        record_diagnostics(compiled.diagnostics);

        while (!compiled.ok() && result.iterations_used < config_.max_repair_iterations) {
            ++result.iterations_used;
            report(Phase::Check, "attempt " + std::to_string(result.iterations_used) + ": " +
                                     summarize(compiled.diagnostics));
            result.source = check_script(result.source, compiled.diagnostics, prompt);
            report(Phase::Compile, "");
            compiled = compile_and_probe(result.source);
            record_diagnostics(compiled.diagnostics);
        }

        result.diagnostics = compiled.diagnostics;
        if (!compiled.ok()) {
            result.error = "script still has errors after " + std::to_string(result.iterations_used) +
                           " repair attempt(s)";
        } else {
            registry.upsert(ScriptRecord{std::string(prompt), result.source.text, true});
            result.script = compiled.script;
            result.success = true;
        }
    } catch (const std::exception& e) {
        result.success = false;
        result.script.reset();
        result.error = e.what();
    }
    transcript_ = nullptr;

    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (result.success)
        report(Phase::Done, result.script->title());
    else
        report(Phase::Failed, result.error);
    return result;
}

} // namespace sono::agent
