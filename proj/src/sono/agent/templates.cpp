#include "sono/agent/templates.hpp"

#include "sono/common/assets.hpp"
#include "sono/common/error.hpp"

namespace sono::agent {
namespace {

bool placeholder_char(char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::string_view trim_right(std::string_view s)
{
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::string_view drop_leading_blank_lines(std::string_view s)
{
    for (;;) {
        const auto nl = s.find('\n');
        if (nl == std::string_view::npos)
            return s;
        if (s.substr(0, nl).find_first_not_of(" \t\r") != std::string_view::npos)
            return s;
        s.remove_prefix(nl + 1);
    }
}

bool is_fence_line(std::string_view line)
{
    line = trim_right(line);
    if (line.substr(0, 3) != "```")
        return false;
    // Optional language tag, one word.
    for (char c : line.substr(3)) {
        if (c == ' ' || c == '`')
            return false;
    }
    return true;
}

} // namespace

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values)
{
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '<') {
            std::size_t j = i + 1;
            while (j < tmpl.size() && placeholder_char(tmpl[j]))
                ++j;
            if (j < tmpl.size() && tmpl[j] == '>' && j > i + 1) {
                if (auto it = values.find(tmpl.substr(i + 1, j - i - 1)); it != values.end()) {
                    out += it->second;
                    i = j + 1;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i++]);
    }
    return out;
}

std::string escape_prompt_text(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out.push_back(c);
    }
    return out;
}

std::string strip_code_fences(std::string_view text)
{
    std::string_view body = drop_leading_blank_lines(text);
    const std::string_view trimmed = trim_right(body);
    const auto first_nl = trimmed.find('\n');
    if (first_nl == std::string_view::npos || !is_fence_line(trimmed.substr(0, first_nl)))
        return std::string(body);
    const auto last_nl = trimmed.rfind('\n');
    if (trim_right(trimmed.substr(last_nl + 1)) != "```")
        return std::string(body);
    const std::string_view inner =
        last_nl == first_nl ? std::string_view{} : trimmed.substr(first_nl + 1, last_nl - first_nl - 1);
    return std::string(drop_leading_blank_lines(inner));
}

std::string format_diagnostic_list(const std::vector<script::Diagnostic>& diagnostics)
{
    std::string out;
    for (const auto& d : diagnostics) {
        out += std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + " " +
               std::string(script::code_name(d.code)) + " " + d.message + "\n";
    }
    return out;
}

ChatPrompt enhance_request(std::string_view user_prompt)
{
    if (user_prompt.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw InputError("prompt must not be empty");
    return ChatPrompt{std::string(assets::language_reference()),
                      render_template(assets::enhance_template(), {{"USER_PROMPT", escape_prompt_text(user_prompt)}})};
}

ChatPrompt generate_request(const AuthoringContext& ctx)
{
    if (ctx.current_prompt.find_first_not_of(" \t\r\n") == std::string::npos)
        throw InputError("prompt must not be empty");
    if (!ctx.enhanced_prompt)
        throw InputError("generation needs the enhanced prompt");
    const std::map<std::string, std::string, std::less<>> values = {
        {"CURRENT_PROMPT", escape_prompt_text(ctx.current_prompt)},
        {"PREVIOUS_PROMPT", escape_prompt_text(ctx.previous_prompt.value_or(""))},
        {"PREVIOUS_SCRIPT", ctx.previous_script ? ctx.previous_script->text : std::string()},
        {"ENHANCED_PROMPT", *ctx.enhanced_prompt},
        {"EXAMPLE_SCRIPT", std::string(assets::example_script())},
    };
    std::string system = ctx.docs.empty() ? std::string(assets::language_reference()) : ctx.docs;
    return ChatPrompt{std::move(system), render_template(assets::generate_template(), values)};
}

ChatPrompt check_request(const script::ScriptSource& source, const std::vector<script::Diagnostic>& diagnostics,
                         std::string_view user_prompt)
{
    if (diagnostics.empty())
        throw InputError("the checker needs at least one diagnostic");
    const std::map<std::string, std::string, std::less<>> values = {
        {"USER_PROMPT", escape_prompt_text(user_prompt)},
        {"DIAGNOSTICS", format_diagnostic_list(diagnostics)},
        {"SCRIPT", source.text},
    };
    return ChatPrompt{std::string(assets::language_reference()), render_template(assets::check_template(), values)};
}

} // namespace sono::agent
