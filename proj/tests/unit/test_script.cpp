#include "sono/common/error.hpp"
#include "sono/script/compile.hpp"
#include "sono/script/instance.hpp"
#include "sono/script/shapes.hpp"

#include "corpus.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>

using namespace sono;
using namespace sono::script;

namespace {

std::shared_ptr<const CompiledScript> must_compile(const std::string& text)
{
    auto result = compile(ScriptSource{text, "<test>"});
    INFO("diagnostics: " << (result.diagnostics.empty() ? "" : format_diagnostic(result.diagnostics.front())));
    REQUIRE(result.ok());
    return result.script;
}

std::unique_ptr<ScriptInstance> must_instantiate(const std::string& text, std::uint64_t budget = kDefaultStepBudget)
{
    auto made = ScriptInstance::create(must_compile(text), budget);
    REQUIRE(made.instance);
    return std::move(made.instance);
}

std::vector<Diagnostic> diagnostics_of(const std::string& text)
{
    return compile(ScriptSource{text, "<test>"}).diagnostics;
}

// Wraps handler bodies into a complete script.
std::string script_with(const std::string& globals, const std::string& on_sound, const std::string& update,
                        const std::string& draw)
{
    return "title \"T\"\n" + globals + "\nfn on_sound(classification, frequency, distance) {\n" + on_sound +
           "\n}\nfn update(dt) {\n" + update + "\n}\nfn draw() {\n" + draw + "\n}\n";
}

double number(const ScriptInstance& inst, const char* name)
{
    auto v = inst.get(name);
    REQUIRE(v.has_value());
    REQUIRE(v->is_number());
    return v->as_number();
}

std::string volume_bar()
{
    return test::read_text(test::source_dir() / "fixtures" / "scripts" / "volume_bar.ssc");
}

} // namespace

TEST_CASE("the volume bar fixture compiles without diagnostics")
{
    auto result = compile(ScriptSource{volume_bar(), "volume_bar.ssc"});
    CHECK(result.diagnostics.empty());
    REQUIRE(result.ok());
    CHECK(result.script->title() == "Volume Bar");
    const auto names = result.script->variable_names();
    CHECK(std::find(names.begin(), names.end(), "fill") != names.end());
    CHECK(std::find(names.begin(), names.end(), "smooth_speed") != names.end());
}

TEST_CASE("volume bar easing follows the lerp recurrence")
{
    auto inst = must_instantiate(volume_bar());
    inst->set("target", Value(0.0));
    CHECK(number(*inst, "fill") == 1.0);
    REQUIRE_FALSE(inst->tick(0.02));
    // lerp(1, 0, 0.02 * 5) = 1 - 0.1
    CHECK(std::abs(number(*inst, "fill") - 0.9) <= 1e-12);
    for (int i = 1; i < 200; ++i)
        REQUIRE_FALSE(inst->tick(0.02));
    CHECK(number(*inst, "fill") < 1e-8);
    CHECK(number(*inst, "fill") == doctest::Approx(std::pow(0.9, 200)).epsilon(1e-9));
}

TEST_CASE("volume bar renders background then fill")
{
    auto inst = must_instantiate(volume_bar());
    inst->set("fill", Value(0.5));
    auto r = inst->render(true);
    REQUIRE_FALSE(r.diagnostic);
    REQUIRE(r.commands.size() == 2);
    const auto* bg = std::get_if<shape::Rect>(&r.commands[0]);
    const auto* fg = std::get_if<shape::Rect>(&r.commands[1]);
    REQUIRE(bg);
    REQUIRE(fg);
    CHECK(bg->width == 8.0);
    CHECK(bg->height == 1.0);
    CHECK(bg->color == Color{0, 0, 0, 1});
    // (bar_width - inset / 2) * fill and bar_height - inset / 2
    CHECK(fg->width == doctest::Approx(3.75));
    CHECK(fg->height == doctest::Approx(0.5));
    CHECK(fg->center == Vec2{0.25, 0.25});
    CHECK(fg->color.r == doctest::Approx(173.0 / 255.0));
    CHECK(inst->last_commands() == r.commands);
}

TEST_CASE("the draw gate suppresses all shapes")
{
    auto inst = must_instantiate(volume_bar());
    auto r = inst->render(false);
    CHECK(r.commands.empty());
    CHECK_FALSE(r.diagnostic);
}

TEST_CASE("on_sound maps frequency and distance into the target")
{
    auto inst = must_instantiate(volume_bar());
    REQUIRE_FALSE(inst->dispatch_sound("unknown", 6.0, 1.0));
    CHECK(number(*inst, "target") == doctest::Approx(0.5 * 6.0 / 10.0));
    CHECK_THROWS_AS(inst->dispatch_sound("unknown", NAN, 1.0), InputError);
    CHECK_THROWS_AS(inst->tick(0.0), InputError);
    CHECK_THROWS_AS(inst->tick(-1.0), InputError);
}

TEST_CASE("set rejects unknown names and kind changes")
{
    auto inst = must_instantiate(volume_bar());
    CHECK_THROWS_AS(inst->set("nope", Value(1.0)), InputError);
    CHECK_THROWS_AS(inst->set("fill", Value(true)), InputError);
}

TEST_CASE("diagnostic corpus produces exactly the expected codes and positions")
{
    const auto cases = test::run_corpus();
    CHECK(cases.size() == 10);
    std::set<std::string> codes;
    for (const auto& c : cases) {
        INFO(c.name);
        CHECK(c.actual == c.expected);
        for (const auto& line : c.actual)
            codes.insert(line.substr(line.find(' ') + 1, line.rfind(' ') - line.find(' ') - 1));
    }
    for (auto code : kAllDiagCodes)
        CHECK_MESSAGE(codes.count(std::string(code_name(code))) == 1, "uncovered code " << code_name(code));
}

TEST_CASE("code names round-trip")
{
    for (auto code : kAllDiagCodes) {
        DiagCode parsed{};
        REQUIRE(parse_code(code_name(code), parsed));
        CHECK(parsed == code);
    }
    DiagCode dummy{};
    CHECK_FALSE(parse_code("E_NOPE", dummy));
    CHECK(default_severity(DiagCode::SizeRange) == Severity::Warning);
    CHECK(format_diagnostic(Diagnostic::error(DiagCode::Type, {3, 7}, "bad")) == "3:7: error E_TYPE: bad");
}

TEST_CASE("syntax errors suppress later checks")
{
    const auto diags = diagnostics_of("title \"x\"\nlet a = (1 + \n");
    REQUIRE_FALSE(diags.empty());
    for (const auto& d : diags)
        CHECK(d.code == DiagCode::Syntax);
}

TEST_CASE("warnings alone still compile")
{
    auto result = compile(ScriptSource{
        script_with("", "", "", "draw.rect(vec2(0, 0), 12.0, 3.0, 0.0, rgb(1, 1, 1))"), "<test>"});
    CHECK(result.ok());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].code == DiagCode::SizeRange);
    CHECK_FALSE(result.diagnostics[0].is_error());
}

TEST_CASE("type checking catches swapped draw arguments")
{
    const auto diags =
        diagnostics_of(script_with("", "", "", "draw.disc(vec2(0, 0), rgb(1, 0, 0), 2.0)"));
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].code == DiagCode::Type);
    CHECK(diags[1].code == DiagCode::Type);
    CHECK(diags[0].pos.col < diags[1].pos.col);
}

TEST_CASE("globals may only refer to earlier globals")
{
    CHECK(diagnostics_of(script_with("let a = 1\nlet b = a + 1", "", "", "")).empty());
    const auto diags = diagnostics_of(script_with("let b = a + 1\nlet a = 1", "", "", ""));
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == DiagCode::UndefinedVar);
}

TEST_CASE("budget exhaustion is contained")
{
    auto looping = must_instantiate(script_with("let n = 0", "n = 1\nwhile true {\nn += 1\n}", "", ""));
    auto other = must_instantiate(volume_bar());

    const auto started = std::chrono::steady_clock::now();
    auto fault = looping->dispatch_sound("unknown", 1.0, 1.0);
    const auto elapsed = std::chrono::steady_clock::now() - started;
    REQUIRE(fault);
    CHECK(fault->code == DiagCode::Budget);
    INFO(format_diagnostic(*fault));
    CHECK(fault->pos == SourcePos{5, 1});   // the while statement
    CHECK(elapsed < std::chrono::milliseconds(100));
    CHECK(number(*looping, "n") == 0.0);

    CHECK_FALSE(other->tick(0.02));
    CHECK_FALSE(looping->tick(0.02));
    CHECK(looping->render(true).commands.empty());
}

TEST_CASE("runtime faults roll back the store")
{
    auto inst = must_instantiate(script_with("let a = 1.0\nlet z = 0.0", "a = 7\na = a / z", "", ""));
    auto fault = inst->dispatch_sound("unknown", 1.0, 1.0);
    REQUIRE(fault);
    CHECK(fault->code == DiagCode::Runtime);
    CHECK(fault->message.rfind("in on_sound: ", 0) == 0);
    CHECK(number(*inst, "a") == 1.0);
}

TEST_CASE("faulting defaults prevent instantiation")
{
    auto made = ScriptInstance::create(must_compile(script_with("let xs = [1]\nlet v = xs[3]", "", "", "")));
    CHECK_FALSE(made.instance);
    REQUIRE(made.diagnostic);
    CHECK(made.diagnostic->code == DiagCode::Runtime);
}

TEST_CASE("arithmetic and builtin semantics")
{
    auto inst = must_instantiate(script_with(
        "let m = -7 % 3\nlet l = lerp(0, 10, 2)\nlet c = clamp(15, 0, 10)\nlet p = pow(2, 10)\n"
        "let s = len(push([1, 2], 3))\nlet v = (vec2(1, 2) + vec2(3, 4)).y\nlet h = hsv(0, 1, 1).r\n"
        "let b = 0\nlet k = 0",
        "", "for i in 0..10 {\nif i == 5 {\nbreak\n}\nk += i\n}\nif not (1 < 2) or false {\nb = 1\n}", ""));
    CHECK(number(*inst, "m") == 2.0);
    CHECK(number(*inst, "l") == 10.0);
    CHECK(number(*inst, "c") == 10.0);
    CHECK(number(*inst, "p") == 1024.0);
    CHECK(number(*inst, "s") == 3.0);
    CHECK(number(*inst, "v") == 6.0);
    CHECK(number(*inst, "h") == 1.0);
    REQUIRE_FALSE(inst->tick(0.02));
    CHECK(number(*inst, "k") == 10.0);
    CHECK(number(*inst, "b") == 0.0);
}

TEST_CASE("every primitive produces its command")
{
    auto inst = must_instantiate(script_with(
        "let col = rgb(0.5, 0.5, 0.5)", "", "",
        "draw.rect(vec2(0, 0), 3, 3, 0, col)\n"
        "draw.disc(vec2(0, 0), 1, col)\n"
        "draw.ring(vec2(0, 0), 1, 0.1, col)\n"
        "draw.arc(vec2(0, 0), 1, 0.1, 0, pi, col)\n"
        "draw.line(vec2(0, 0), vec2(1, 1), 0.1, col)\n"
        "draw.polyline([vec2(0, 0), vec2(1, 0)], 0.1, col)\n"
        "draw.polygon([vec2(0, 0), vec2(1, 0), vec2(0, 1)], col)\n"
        "draw.triangle(vec2(0, 0), vec2(1, 0), vec2(0, 1), col)\n"
        "draw.regular_polygon(vec2(0, 0), 6, 1, 0, col)"));
    auto r = inst->render(true);
    REQUIRE_FALSE(r.diagnostic);
    REQUIRE(r.commands.size() == 9);
    const std::vector<std::string> kinds{"rect", "disc", "ring", "arc", "line",
                                         "polyline", "polygon", "triangle", "regular_polygon"};
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        CHECK(kind_name(r.commands[i]) == kinds[i]);
        CHECK(shape_from_json(to_json(r.commands[i])) == r.commands[i]);
    }
}

TEST_CASE("shape limits are enforced at runtime")
{
    auto inst = must_instantiate(script_with(
        "let sides = 2", "", "", "draw.regular_polygon(vec2(0, 0), sides, 1, 0, rgb(1, 1, 1))"));
    auto r = inst->render(true);
    REQUIRE(r.diagnostic);
    CHECK(r.diagnostic->code == DiagCode::Runtime);
    CHECK(r.commands.empty());

    auto many = must_instantiate(script_with(
        "", "", "", "for i in 0..6000 {\ndraw.disc(vec2(0, 0), 1, rgb(1, 1, 1))\n}"));
    auto r2 = many->render(true);
    REQUIRE(r2.diagnostic);
    CHECK(r2.diagnostic->code == DiagCode::Runtime);
}

TEST_CASE("instances of one script are independent and deterministic")
{
    auto compiled = must_compile(volume_bar());
    auto a = ScriptInstance::create(compiled).instance;
    auto b = ScriptInstance::create(compiled).instance;
    for (int i = 0; i < 20; ++i) {
        REQUIRE_FALSE(a->dispatch_sound("unknown", i % 10, 1.0));
        REQUIRE_FALSE(b->dispatch_sound("unknown", i % 10, 1.0));
        REQUIRE_FALSE(a->tick(0.02));
        REQUIRE_FALSE(b->tick(0.02));
    }
    CHECK(a->render(true).commands == b->render(true).commands);
    REQUIRE_FALSE(a->tick(0.02));
    CHECK(a->store() != b->store());
}

TEST_CASE("the diagnostic JSON form round-trips")
{
    const auto d = Diagnostic::warning(DiagCode::SizeRange, {4, 2}, "too wide");
    CHECK(diagnostic_from_json(to_json(d)) == d);
    CHECK_THROWS(shape_from_json(nlohmann::json{{"kind", "blob"}}));
}
