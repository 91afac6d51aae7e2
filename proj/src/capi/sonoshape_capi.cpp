#include "sonoshape/sonoshape.h"

#include "sono/agent/pipeline.hpp"
#include "sono/audio/wav.hpp"
#include "sono/common/error.hpp"
#include "sono/script/instance.hpp"
#include "sono/script/shapes.hpp"
#include "sono/session/config.hpp"
#include "sono/session/session.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct sono_config {
    sono::session::SessionConfig cfg;
};

struct sono_script {
    std::shared_ptr<const sono::script::CompiledScript> compiled;
};

struct sono_instance {
    std::unique_ptr<sono::script::ScriptInstance> inst;
};

struct sono_session {
    std::unique_ptr<sono::session::Session> session;
};

namespace {

using ojson = nlohmann::ordered_json;

thread_local std::string g_last_error;

sono_status fail(sono_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

char* dup_string(std::string_view s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

void put(char** out, std::string_view s)
{
    if (out)
        *out = dup_string(s);
}

// Maps the core's exception types onto status codes at the boundary.
template <typename F>
sono_status guarded(F&& body)
{
    g_last_error.clear();
    try {
        return body();
    } catch (const sono::InputError& e) {
        return fail(SONO_ERR_INVALID_ARGUMENT, e.what());
    } catch (const sono::IoError& e) {
        return fail(SONO_ERR_IO, e.what());
    } catch (const sono::ParseError& e) {
        return fail(SONO_ERR_PARSE, e.what());
    } catch (const sono::UnsupportedError& e) {
        return fail(SONO_ERR_UNSUPPORTED, e.what());
    } catch (const std::exception& e) {
        return fail(SONO_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SONO_ERR_INTERNAL, "unknown error");
    }
}

sono_status null_arg(const char* name)
{
    return fail(SONO_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

sono_status report_fault(const std::optional<sono::script::Diagnostic>& diag, char** out_diagnostic)
{
    if (!diag)
        return SONO_OK;
    put(out_diagnostic, sono::script::to_json(*diag).dump());
    return fail(SONO_ERR_SCRIPT_FAULT, sono::script::format_diagnostic(*diag));
}

std::string diagnostics_json(const std::vector<sono::script::Diagnostic>& diags)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : diags)
        arr.push_back(sono::script::to_json(d));
    return arr.dump();
}

} // namespace

extern "C" {

const char* sono_version(void)
{
    return "0.1.0";
}

const char* sono_status_name(sono_status status)
{
    switch (status) {
    case SONO_OK: return "ok";
    case SONO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SONO_ERR_IO: return "i/o error";
    case SONO_ERR_PARSE: return "parse error";
    case SONO_ERR_UNSUPPORTED: return "unsupported";
    case SONO_ERR_COMPILE: return "compile error";
    case SONO_ERR_SCRIPT_FAULT: return "script fault";
    case SONO_ERR_AUTHORING: return "authoring failed";
    case SONO_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* sono_last_error(void)
{
    return g_last_error.c_str();
}

void sono_string_free(char* s)
{
    std::free(s);
}

sono_status sono_config_create(sono_config** out)
{
    if (!out)
        return null_arg("out");
    return guarded([&] {
        *out = new sono_config{};
        return SONO_OK;
    });
}

void sono_config_destroy(sono_config* config)
{
    delete config;
}

sono_status sono_config_set(sono_config* config, const char* key, const char* value)
{
    if (!config || !key || !value)
        return null_arg("config, key and value");
    return guarded([&] {
        config->cfg.set(key, value);
        return SONO_OK;
    });
}

sono_status sono_config_load_file(sono_config* config, const char* path)
{
    if (!config || !path)
        return null_arg("config and path");
    return guarded([&] {
        config->cfg.load_file(path);
        return SONO_OK;
    });
}

sono_status sono_config_validate(const sono_config* config)
{
    if (!config)
        return null_arg("config");
    return guarded([&] {
        config->cfg.validate();
        return SONO_OK;
    });
}

sono_status sono_compile(const char* source, size_t length, const char* origin, sono_script** out_script,
                         char** out_diagnostics)
{
    if (!source && length != 0)
        return null_arg("source");
    return guarded([&] {
        if (out_script)
            *out_script = nullptr;
        auto result = sono::script::compile(
            sono::script::ScriptSource{std::string(source ? source : "", length), origin ? origin : "<input>"});
        put(out_diagnostics, diagnostics_json(result.diagnostics));
        if (!result.ok()) {
            for (const auto& d : result.diagnostics) {
                if (d.is_error())
                    return fail(SONO_ERR_COMPILE, sono::script::format_diagnostic(d));
            }
        }
        if (out_script)
            *out_script = new sono_script{result.script};
        return SONO_OK;
    });
}

void sono_script_destroy(sono_script* script)
{
    delete script;
}

sono_status sono_script_title(const sono_script* script, char** out_title)
{
    if (!script || !out_title)
        return null_arg("script and out_title");
    return guarded([&] {
        *out_title = dup_string(script->compiled->title());
        return SONO_OK;
    });
}

sono_status sono_instance_create(const sono_script* script, uint64_t step_budget, sono_instance** out,
                                 char** out_diagnostic)
{
    if (!script || !out)
        return null_arg("script and out");
    return guarded([&] {
        *out = nullptr;
        auto made = sono::script::ScriptInstance::create(
            script->compiled, step_budget == 0 ? sono::script::kDefaultStepBudget : step_budget);
        if (!made.instance)
            return report_fault(made.diagnostic, out_diagnostic);
        *out = new sono_instance{std::move(made.instance)};
        return SONO_OK;
    });
}

void sono_instance_destroy(sono_instance* instance)
{
    delete instance;
}

sono_status sono_instance_dispatch_sound(sono_instance* instance, const char* classification, double frequency,
                                         double distance, char** out_diagnostic)
{
    if (!instance || !classification)
        return null_arg("instance and classification");
    return guarded([&] {
        return report_fault(instance->inst->dispatch_sound(classification, frequency, distance), out_diagnostic);
    });
}

sono_status sono_instance_tick(sono_instance* instance, double dt_seconds, char** out_diagnostic)
{
    if (!instance)
        return null_arg("instance");
    return guarded([&] { return report_fault(instance->inst->tick(dt_seconds), out_diagnostic); });
}

sono_status sono_instance_render(sono_instance* instance, int should_draw, char** out_commands, char** out_diagnostic)
{
    if (!instance)
        return null_arg("instance");
    return guarded([&] {
        auto rendered = instance->inst->render(should_draw != 0);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : rendered.commands)
            arr.push_back(sono::script::to_json(c));
        put(out_commands, arr.dump());
        return report_fault(rendered.diagnostic, out_diagnostic);
    });
}

sono_status sono_instance_get_number(const sono_instance* instance, const char* name, double* out)
{
    if (!instance || !name || !out)
        return null_arg("instance, name and out");
    return guarded([&] {
        auto v = instance->inst->get(name);
        if (!v)
            return fail(SONO_ERR_INVALID_ARGUMENT, std::string("no variable named '") + name + "'");
        if (!v->is_number())
            return fail(SONO_ERR_INVALID_ARGUMENT, std::string("variable '") + name + "' is not a number");
        *out = v->as_number();
        return SONO_OK;
    });
}

sono_status sono_instance_set_number(sono_instance* instance, const char* name, double value)
{
    if (!instance || !name)
        return null_arg("instance and name");
    return guarded([&] {
        instance->inst->set(name, sono::script::Value(value));
        return SONO_OK;
    });
}

sono_status sono_analyze_wav(const char* path, char** out_ndjson)
{
    if (!path || !out_ndjson)
        return null_arg("path and out_ndjson");
    return guarded([&] {
        std::string text;
        for (const auto& f : sono::audio::analyze_wav(path)) {
            ojson line;
            line["seq"] = f.seq;
            line["t_ms"] = f.timestamp_ms;
            line["dominant_hz"] = f.dominant_freq_hz ? ojson(*f.dominant_freq_hz) : ojson(nullptr);
            line["norm"] = f.normalized;
            line["rms"] = f.rms;
            text += line.dump();
            text += '\n';
        }
        *out_ndjson = dup_string(text);
        return SONO_OK;
    });
}

sono_status sono_author(const sono_config* config, const char* prompt, sono_phase_fn on_phase, void* user,
                        char** out_result)
{
    if (!config || !prompt)
        return null_arg("config and prompt");
    return guarded([&] {
        config->cfg.agent.validate();
        auto transport = sono::agent::make_transport(config->cfg.agent);
        sono::agent::AgentPipeline pipeline(*transport, config->cfg.agent);
        sono::agent::ScriptRegistry registry(config->cfg.registry_path);
        sono::agent::PhaseCallback callback;
        if (on_phase) {
            callback = [&](sono::agent::Phase phase, const std::string& detail) {
                on_phase(std::string(sono::agent::phase_name(phase)).c_str(), detail.c_str(), user);
            };
        }
        const auto result = pipeline.author(prompt, registry, callback);

        ojson j;
        j["success"] = result.success;
        j["title"] = result.script ? ojson(result.script->title()) : ojson(nullptr);
        j["iterations_used"] = result.iterations_used;
        ojson transcript = ojson::array();
        for (const auto& t : result.transcript) {
            ojson entry;
            entry["agent"] = t.agent;
            entry["request_sha256"] = t.request_digest;
            entry["response_sha256"] = t.response_digest;
            entry["diagnostics"] = ojson::parse(diagnostics_json(t.diagnostics));
            transcript.push_back(std::move(entry));
        }
        j["transcript"] = std::move(transcript);
        j["diagnostics"] = ojson::parse(diagnostics_json(result.diagnostics));
        j["error"] = result.error;
        j["script"] = result.source.text;
        put(out_result, j.dump(2));
        if (!result.success)
            return fail(SONO_ERR_AUTHORING, result.error);
        return SONO_OK;
    });
}

sono_status sono_session_create(const sono_config* config, sono_session** out)
{
    if (!config || !out)
        return null_arg("config and out");
    return guarded([&] {
        config->cfg.validate();
        *out = new sono_session{std::make_unique<sono::session::Session>(config->cfg)};
        return SONO_OK;
    });
}

void sono_session_destroy(sono_session* session)
{
    delete session;
}

sono_status sono_session_start(sono_session* session)
{
    if (!session)
        return null_arg("session");
    return guarded([&] {
        session->session->start();
        return SONO_OK;
    });
}

sono_status sono_session_stop(sono_session* session)
{
    if (!session)
        return null_arg("session");
    return guarded([&] {
        session->session->stop();
        return SONO_OK;
    });
}

sono_status sono_session_wait(sono_session* session)
{
    if (!session)
        return null_arg("session");
    return guarded([&] {
        session->session->wait();
        return SONO_OK;
    });
}

sono_status sono_session_port(const sono_session* session, uint16_t* out_port)
{
    if (!session || !out_port)
        return null_arg("session and out_port");
    *out_port = session->session->port();
    return SONO_OK;
}

} // extern "C"
