#pragma once

#include "sono/script/compile.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sono::agent {

/// What the generation agent sees. Previous fields are filled whenever an
/// earlier script exists; deciding whether the new request is a follow-up is
/// left to the model.
struct AuthoringContext {
    std::string current_prompt;
    std::optional<std::string> previous_prompt;
    std::optional<script::ScriptSource> previous_script;
    std::optional<std::string> enhanced_prompt;
    std::string docs;
};

/// One chat exchange: the language reference as system message plus a
/// rendered template as user message.
struct ChatPrompt {
    std::string system;
    std::string user;
};

/// Replaces `<NAME>` placeholders in one left-to-right pass. Substituted text
/// is never rescanned, and placeholders missing from `values` stay verbatim.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values);

/// Neutralizes angle brackets in user-typed text so it cannot look like a
/// placeholder or markup.
std::string escape_prompt_text(std::string_view text);

/// Removes one balanced ``` fence pair (opening line may carry a language
/// tag) and leading blank lines. Anything else passes through unchanged.
std::string strip_code_fences(std::string_view text);

/// "line:col CODE message", one diagnostic per line.
std::string format_diagnostic_list(const std::vector<script::Diagnostic>& diagnostics);

ChatPrompt enhance_request(std::string_view user_prompt);
ChatPrompt generate_request(const AuthoringContext& ctx);
ChatPrompt check_request(const script::ScriptSource& source, const std::vector<script::Diagnostic>& diagnostics,
                         std::string_view user_prompt);

} // namespace sono::agent
