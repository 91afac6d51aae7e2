// Command-line front end over the C API.

#include "sonoshape/sonoshape.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCompile = 3;
constexpr int kExitAuthoring = 4;
constexpr int kExitIo = 5;

struct CString {
    char* p = nullptr;
    ~CString() { sono_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
    sono_config* p = nullptr;
    ~ConfigHandle() { sono_config_destroy(p); }
};

int exit_code_for(sono_status status)
{
    switch (status) {
    case SONO_OK: return 0;
    case SONO_ERR_INVALID_ARGUMENT:
    case SONO_ERR_PARSE: return kExitUsage;
    case SONO_ERR_COMPILE: return kExitCompile;
    case SONO_ERR_AUTHORING: return kExitAuthoring;
    default: return kExitIo;
    }
}

int report(sono_status status)
{
    std::cerr << "sonoshape: " << sono_last_error() << "\n";
    return exit_code_for(status);
}

// Flags that map one-to-one onto config keys, grouped by the subcommands
// that accept them.
const std::vector<std::pair<std::string, std::string>> kAgentFlags = {
    {"--agent-mode", "mock or live"},
    {"--endpoint", "chat-completions URL (live mode)"},
    {"--model", "model id (live mode)"},
    {"--api-key-env", "environment variable holding the API key"},
    {"--mock-dir", "directory of canned agent replies (mock mode)"},
    {"--max-iterations", "repair attempts after the first compile"},
    {"--timeout-ms", "per-request timeout"},
    {"--registry", "script registry JSON file"},
};

const std::vector<std::pair<std::string, std::string>> kServeFlags = {
    {"--port", "listen port, 0 for any free port"},
    {"--bind", "listen address"},
    {"--web-root", "directory served over plain HTTP"},
    {"--source", "live, wav or synth"},
    {"--wav", "WAV file to stream (implies --source wav)"},
    {"--loop", "loop the WAV file (true/false)"},
    {"--tone", "synth tone, e.g. 440 or 440:0.5,1000:0.3"},
    {"--sample-rate", "synth and live sample rate"},
    {"--tick-rate", "script updates per second"},
    {"--frame-rate", "frames per second"},
    {"--step-budget", "evaluation steps per handler call"},
};

using FlagValues = std::map<std::string, std::string>;

void add_flags(CLI::App* cmd, const std::vector<std::pair<std::string, std::string>>& flags, FlagValues& values)
{
    for (const auto& [flag, help] : flags)
        cmd->add_option(flag, values[flag.substr(2)], help);
}

// Defaults, then the config file, then flags.
sono_status build_config(ConfigHandle& config, const std::string& config_file, const FlagValues& values,
                         const CLI::App* cmd)
{
    if (auto s = sono_config_create(&config.p); s != SONO_OK)
        return s;
    if (auto s = sono_config_set(config.p, "mock-dir", "fixtures/mock/demo"); s != SONO_OK)
        return s;
    if (!config_file.empty()) {
        if (auto s = sono_config_load_file(config.p, config_file.c_str()); s != SONO_OK)
            return s;
    }
    for (const auto& [key, value] : values) {
        if (cmd->count("--" + key) == 0)
            continue;
        if (auto s = sono_config_set(config.p, key.c_str(), value.c_str()); s != SONO_OK)
            return s;
    }
    return SONO_OK;
}

int run_compile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "sonoshape: cannot read " << path << "\n";
        return kExitIo;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    sono_script* script = nullptr;
    CString diags;
    const auto status = sono_compile(text.data(), text.size(), path.c_str(), &script, &diags.p);
    sono_script_destroy(script);
    if (status != SONO_OK && status != SONO_ERR_COMPILE)
        return report(status);
    for (const auto& d : nlohmann::json::parse(diags.str())) {
        std::cout << path << ":" << d.at("line").get<int>() << ":" << d.at("col").get<int>() << ": "
                  << d.at("severity").get<std::string>() << " " << d.at("code").get<std::string>() << ": "
                  << d.at("message").get<std::string>() << "\n";
    }
    return exit_code_for(status);
}

int run_analyze(const std::string& path)
{
    CString out;
    if (auto s = sono_analyze_wav(path.c_str(), &out.p); s != SONO_OK)
        return report(s);
    std::cout << out.str() << std::flush;
    return 0;
}

int run_author(const ConfigHandle& config, const std::string& prompt)
{
    auto on_phase = [](const char* phase, const char* detail, void*) {
        std::cerr << "[" << phase << "]" << (detail[0] ? " " : "") << detail << "\n";
    };
    CString result;
    const auto status = sono_author(config.p, prompt.c_str(), on_phase, nullptr, &result.p);
    if (result.p)
        std::cout << result.str() << "\n";
    if (status == SONO_ERR_AUTHORING) {
        std::cerr << "sonoshape: authoring failed: " << sono_last_error() << "\n";
        return kExitAuthoring;
    }
    if (status != SONO_OK)
        return report(status);
    return 0;
}

int run_serve(const ConfigHandle& config)
{
    // Block the stop signals before any thread exists so only sigwait sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    sono_session* session = nullptr;
    if (auto s = sono_session_create(config.p, &session); s != SONO_OK)
        return report(s);
    std::unique_ptr<sono_session, void (*)(sono_session*)> guard(session, sono_session_destroy);
    if (auto s = sono_session_start(session); s != SONO_OK)
        return report(s);
    uint16_t port = 0;
    sono_session_port(session, &port);
    std::cerr << "sonoshape: serving on port " << port << " (WebSocket at /stream)\n";

    int sig = 0;
    sigwait(&stop_signals, &sig);
    std::cerr << "sonoshape: stopping\n";
    sono_session_stop(session);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sound-reactive shape scripts: author, compile, analyze and serve."};
    app.require_subcommand(1);
    std::string config_file;
    app.add_option("--config", config_file, "key=value settings file; flags take precedence")
        ->check(CLI::ExistingFile);

    FlagValues serve_values, author_values;

    auto* serve = app.add_subcommand("serve", "Run the audio-driven session and WebSocket server");
    add_flags(serve, kServeFlags, serve_values);
    add_flags(serve, kAgentFlags, serve_values);

    std::string prompt;
    auto* author = app.add_subcommand("author", "Author one script from a prompt and store it in the registry");
    author->add_option("prompt", prompt, "what to draw")->required();
    add_flags(author, kAgentFlags, author_values);

    std::string script_path;
    auto* compile = app.add_subcommand("compile", "Check a script file and print its diagnostics");
    compile->add_option("file", script_path, "Shape Script source (.ssc)")->required();

    std::string wav_path;
    auto* analyze = app.add_subcommand("analyze", "Print one NDJSON feature record per 100 ms of a WAV file");
    analyze->add_option("wav", wav_path, "PCM16 or float32 WAV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*compile)
        return run_compile(script_path);
    if (*analyze)
        return run_analyze(wav_path);

    ConfigHandle config;
    const bool serving = static_cast<bool>(*serve);
    if (auto s = build_config(config, config_file, serving ? serve_values : author_values, serving ? serve : author);
        s != SONO_OK)
        return report(s);
    if (auto s = sono_config_validate(config.p); s != SONO_OK)
        return report(s);
    return serving ? run_serve(config) : run_author(config, prompt);
}
