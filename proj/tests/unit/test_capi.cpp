#include "sonoshape/sonoshape.h"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Takes ownership of a library-allocated string.
std::string take(char* s)
{
    std::unique_ptr<char, void (*)(char*)> owned(s, sono_string_free);
    return s ? std::string(s) : std::string();
}

std::string fixture(const std::string& rel)
{
    return sono::test::read_text(sono::test::source_dir() / "fixtures" / rel);
}

struct Compiled {
    sono_script* script = nullptr;
    ~Compiled() { sono_script_destroy(script); }
};

struct Instance {
    sono_instance* inst = nullptr;
    ~Instance() { sono_instance_destroy(inst); }
};

struct Config {
    sono_config* cfg = nullptr;
    Config() { REQUIRE(sono_config_create(&cfg) == SONO_OK); }
    ~Config() { sono_config_destroy(cfg); }
};

} // namespace

TEST_CASE("status names and version")
{
    CHECK(std::string(sono_version()).size() > 0);
    CHECK(std::string(sono_status_name(SONO_OK)) == "ok");
    CHECK(std::string(sono_status_name(SONO_ERR_COMPILE)).size() > 0);
    CHECK(std::string(sono_status_name(static_cast<sono_status>(99))).size() > 0);
}

TEST_CASE("compiling the volume bar through the C API")
{
    const auto text = fixture("scripts/volume_bar.ssc");
    Compiled c;
    char* diags = nullptr;
    REQUIRE(sono_compile(text.data(), text.size(), "volume_bar.ssc", &c.script, &diags) == SONO_OK);
    CHECK(json::parse(take(diags)) == json::array());
    char* title = nullptr;
    REQUIRE(sono_script_title(c.script, &title) == SONO_OK);
    CHECK(take(title) == "Volume Bar");

    Instance i;
    REQUIRE(sono_instance_create(c.script, 0, &i.inst, nullptr) == SONO_OK);
    REQUIRE(sono_instance_set_number(i.inst, "target", 0.0) == SONO_OK);
    REQUIRE(sono_instance_tick(i.inst, 0.02, nullptr) == SONO_OK);
    double fill = 0;
    REQUIRE(sono_instance_get_number(i.inst, "fill", &fill) == SONO_OK);
    // One step of lerp(1, 0, 0.02 * 5).
    CHECK(std::abs(fill - 0.9) <= 1e-12);

    REQUIRE(sono_instance_set_number(i.inst, "fill", 0.5) == SONO_OK);
    char* commands = nullptr;
    REQUIRE(sono_instance_render(i.inst, 1, &commands, nullptr) == SONO_OK);
    const auto arr = json::parse(take(commands));
    REQUIRE(arr.size() == 2);
    CHECK(arr[0]["kind"] == "rect");
    CHECK(arr[0]["width"] == 8.0);
    CHECK(arr[1]["width"] == 7.5 * 0.5);

    REQUIRE(sono_instance_render(i.inst, 0, &commands, nullptr) == SONO_OK);
    CHECK(json::parse(take(commands)) == json::array());

    CHECK(sono_instance_get_number(i.inst, "nothing", &fill) == SONO_ERR_INVALID_ARGUMENT);
    CHECK(std::string(sono_last_error()).find("nothing") != std::string::npos);
    CHECK(sono_instance_get_number(i.inst, "bar_color", &fill) == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_instance_set_number(i.inst, "bar_color", 1.0) == SONO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("compile errors come back as JSON diagnostics")
{
    const auto text = fixture("scripts/missing_draw.ssc");
    Compiled c;
    char* diags = nullptr;
    CHECK(sono_compile(text.data(), text.size(), "m.ssc", &c.script, &diags) == SONO_ERR_COMPILE);
    CHECK(c.script == nullptr);
    const auto arr = json::parse(take(diags));
    REQUIRE(arr.size() == 1);
    CHECK(arr[0]["code"] == "E_MISSING_HANDLER");
    CHECK(std::string(sono_last_error()).find("E_MISSING_HANDLER") != std::string::npos);
}

TEST_CASE("runtime faults report a diagnostic and keep the instance usable")
{
    const std::string text = "title \"loop\"\nlet n = 0\nfn on_sound(c, f, d) {\n    while true {\n"
                             "        n += 1\n    }\n}\nfn update(dt) {\n}\nfn draw() {\n}\n";
    Compiled c;
    REQUIRE(sono_compile(text.data(), text.size(), "loop.ssc", &c.script, nullptr) == SONO_OK);
    Instance i;
    REQUIRE(sono_instance_create(c.script, 1000, &i.inst, nullptr) == SONO_OK);
    char* diag = nullptr;
    CHECK(sono_instance_dispatch_sound(i.inst, "unknown", 5.0, 1.0, &diag) == SONO_ERR_SCRIPT_FAULT);
    const auto d = json::parse(take(diag));
    CHECK(d["code"] == "E_BUDGET");
    CHECK(d["line"] == 4);
    double n = -1;
    REQUIRE(sono_instance_get_number(i.inst, "n", &n) == SONO_OK);
    CHECK(n == 0.0);
    CHECK(sono_instance_tick(i.inst, 0.02, nullptr) == SONO_OK);
}

TEST_CASE("null arguments are rejected")
{
    CHECK(sono_compile(nullptr, 5, nullptr, nullptr, nullptr) == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_instance_tick(nullptr, 0.02, nullptr) == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_config_set(nullptr, "port", "1") == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_author(nullptr, "x", nullptr, nullptr, nullptr) == SONO_ERR_INVALID_ARGUMENT);
    CHECK(std::string(sono_last_error()).size() > 0);
    sono_script_destroy(nullptr);
    sono_instance_destroy(nullptr);
    sono_config_destroy(nullptr);
    sono_session_destroy(nullptr);
    sono_string_free(nullptr);
}

TEST_CASE("config errors map to status codes")
{
    Config c;
    CHECK(sono_config_set(c.cfg, "port", "abc") == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_config_set(c.cfg, "bogus", "1") == SONO_ERR_INVALID_ARGUMENT);
    CHECK(sono_config_load_file(c.cfg, "/nonexistent/sono.conf") == SONO_ERR_IO);
    sono::test::TempDir dir("capi");
    {
        std::ofstream(dir.path() / "bad.conf") << "no equals here\n";
    }
    CHECK(sono_config_load_file(c.cfg, (dir / "bad.conf").c_str()) == SONO_ERR_PARSE);
    CHECK(sono_config_validate(c.cfg) == SONO_ERR_INVALID_ARGUMENT);
    REQUIRE(sono_config_set(c.cfg, "mock-dir", "somewhere") == SONO_OK);
    CHECK(sono_config_validate(c.cfg) == SONO_OK);
}

TEST_CASE("analyze emits one line per chunk")
{
    sono::test::TempDir dir("capi");
    const auto wav = dir / "tone.wav";
    sono::test::write_pcm16_wav(wav, sono::test::reference_tone({{440.0, 0.5}}, 44100, 44100), 44100);
    char* out = nullptr;
    REQUIRE(sono_analyze_wav(wav.c_str(), &out) == SONO_OK);
    std::istringstream lines(take(out));
    int count = 0;
    for (std::string line; std::getline(lines, line); ++count) {
        const auto j = json::parse(line);
        CHECK(j["seq"] == count);
        CHECK(j["dominant_hz"] == 440.0);
    }
    CHECK(count == 10);
    CHECK(sono_analyze_wav((dir / "missing.wav").c_str(), &out) == SONO_ERR_IO);
}

TEST_CASE("mock authoring through the C API")
{
    sono::test::TempDir dir("capi");
    Config c;
    REQUIRE(sono_config_set(c.cfg, "registry", (dir / "scripts.json").c_str()) == SONO_OK);
    const auto mock = sono::test::source_dir() / "fixtures" / "mock";
    REQUIRE(sono_config_set(c.cfg, "mock-dir", (mock / "repair_once").c_str()) == SONO_OK);

    std::vector<std::string> phases;
    auto on_phase = [](const char* phase, const char*, void* user) {
        static_cast<std::vector<std::string>*>(user)->push_back(phase);
    };
    char* result = nullptr;
    REQUIRE(sono_author(c.cfg, "a wave", on_phase, &phases, &result) == SONO_OK);
    const auto j = json::parse(take(result));
    CHECK(j["success"] == true);
    CHECK(j["title"] == "a wave");
    CHECK(j["iterations_used"] == 1);
    CHECK(j["transcript"].size() == 3);
    CHECK(phases.front() == "enhance");
    CHECK(phases.back() == "done");
    CHECK(std::find(phases.begin(), phases.end(), "check") != phases.end());

    REQUIRE(sono_config_set(c.cfg, "mock-dir", (mock / "all_bad").c_str()) == SONO_OK);
    CHECK(sono_author(c.cfg, "another", nullptr, nullptr, &result) == SONO_ERR_AUTHORING);
    const auto bad = json::parse(take(result));
    CHECK(bad["success"] == false);
    CHECK(bad["title"].is_null());
    CHECK(bad["iterations_used"] == 3);
    CHECK(bad["diagnostics"][0]["code"] == "E_UNKNOWN_PRIMITIVE");
}

TEST_CASE("a session starts and stops through the C API")
{
    sono::test::TempDir dir("capi");
    Config c;
    REQUIRE(sono_config_set(c.cfg, "port", "0") == SONO_OK);
    REQUIRE(sono_config_set(c.cfg, "bind", "127.0.0.1") == SONO_OK);
    REQUIRE(sono_config_set(c.cfg, "registry", (dir / "scripts.json").c_str()) == SONO_OK);
    REQUIRE(sono_config_set(c.cfg, "mock-dir", "unused") == SONO_OK);
    sono_session* s = nullptr;
    REQUIRE(sono_session_create(c.cfg, &s) == SONO_OK);
    REQUIRE(sono_session_start(s) == SONO_OK);
    std::uint16_t port = 0;
    REQUIRE(sono_session_port(s, &port) == SONO_OK);
    CHECK(port != 0);
    CHECK(sono_session_stop(s) == SONO_OK);
    CHECK(sono_session_wait(s) == SONO_OK);
    sono_session_destroy(s);

    REQUIRE(sono_config_set(c.cfg, "source", "live") == SONO_OK);
    REQUIRE(sono_session_create(c.cfg, &s) == SONO_OK);
    CHECK(sono_session_start(s) == SONO_ERR_UNSUPPORTED);
    sono_session_destroy(s);
}
