#pragma once

// Runs the diagnostic corpus under fixtures/diagnostics the way its README
// describes and returns expected and actual lines for comparison.

#include "sono/script/compile.hpp"
#include "sono/script/instance.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace sono::test {

struct CorpusCase {
    std::string name;
    std::vector<std::string> expected;
    std::vector<std::string> actual;
};

inline std::string corpus_line(std::string_view phase, const script::Diagnostic& d)
{
    return std::string(phase) + " " + std::string(script::code_name(d.code)) + " " + std::to_string(d.pos.line) +
           ":" + std::to_string(d.pos.col);
}

inline std::vector<std::string> run_corpus_script(const std::filesystem::path& path)
{
    std::vector<std::string> out;
    auto result = script::compile(script::ScriptSource{read_text(path), path.filename().string()});
    for (const auto& d : result.diagnostics)
        out.push_back(corpus_line("compile", d));
    if (!result.ok())
        return out;
    auto made = script::ScriptInstance::create(result.script);
    if (!made.instance) {
        out.push_back(corpus_line("init", *made.diagnostic));
        return out;
    }
    auto& inst = *made.instance;
    if (auto d = inst.dispatch_sound("unknown", 5.0, 1.0))
        out.push_back(corpus_line("on_sound", *d));
    if (auto d = inst.tick(0.02))
        out.push_back(corpus_line("update", *d));
    if (auto r = inst.render(true); r.diagnostic)
        out.push_back(corpus_line("draw", *r.diagnostic));
    return out;
}

inline std::vector<CorpusCase> run_corpus()
{
    const auto dir = source_dir() / "fixtures" / "diagnostics";
    std::vector<std::filesystem::path> scripts;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".ssc")
            scripts.push_back(entry.path());
    }
    std::sort(scripts.begin(), scripts.end());

    std::vector<CorpusCase> cases;
    for (const auto& path : scripts) {
        CorpusCase c;
        c.name = path.stem().string();
        std::istringstream expect(read_text(std::filesystem::path(path).replace_extension(".expect")));
        for (std::string line; std::getline(expect, line);) {
            if (!line.empty())
                c.expected.push_back(line);
        }
        c.actual = run_corpus_script(path);
        cases.push_back(std::move(c));
    }
    return cases;
}

} // namespace sono::test
