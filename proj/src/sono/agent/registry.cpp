#include "sono/agent/registry.hpp"

#include "sono/common/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace sono::agent {
namespace {

char fold(char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

} // namespace

bool same_title(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return fold(x) == fold(y); });
}

std::string registry_to_json(const std::vector<ScriptRecord>& records)
{
    nlohmann::ordered_json scripts = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json item;
        item["userPrompt"] = r.user_prompt;
        item["scriptContent"] = r.script_content;
        item["drawUI"] = r.draw_ui;
        scripts.push_back(std::move(item));
    }
    nlohmann::ordered_json doc;
    doc["scripts"] = std::move(scripts);
    return doc.dump(2) + "\n";
}

std::vector<ScriptRecord> registry_from_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("registry is not valid JSON (byte " + std::to_string(e.byte) + "): " + e.what());
    }
    if (!doc.is_object() || !doc.contains("scripts") || !doc["scripts"].is_array())
        throw ParseError("registry must be an object with a \"scripts\" array");

    std::vector<ScriptRecord> records;
    const auto& scripts = doc["scripts"];
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        const auto& item = scripts[i];
        const std::string where = "registry entry " + std::to_string(i);
        if (!item.is_object())
            throw ParseError(where + " is not an object");
        auto field = [&](const char* name) -> const nlohmann::json& {
            if (!item.contains(name))
                throw ParseError(where + " lacks \"" + name + "\"");
            return item[name];
        };
        const auto& prompt = field("userPrompt");
        const auto& content = field("scriptContent");
        const auto& draw = field("drawUI");
        if (!prompt.is_string() || !content.is_string() || !draw.is_boolean())
            throw ParseError(where + " has a field of the wrong JSON type");
        records.push_back(ScriptRecord{prompt.get<std::string>(), content.get<std::string>(), draw.get<bool>()});
    }
    return records;
}

std::vector<ScriptRecord> registry_load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            return {};
        throw IoError("cannot read registry " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return registry_from_json(ss.str());
}

void registry_save(const std::filesystem::path& path, const std::vector<ScriptRecord>& records)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out << registry_to_json(records);
        out.flush();
        if (!out)
            throw IoError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace registry " + path.string());
    }
}

std::size_t upsert_record(std::vector<ScriptRecord>& records, ScriptRecord record)
{
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (same_title(records[i].user_prompt, record.user_prompt)) {
            records[i] = std::move(record);
            return i;
        }
    }
    records.push_back(std::move(record));
    return records.size() - 1;
}

bool should_draw(const std::vector<ScriptRecord>& records, std::string_view title)
{
    for (const auto& r : records) {
        if (same_title(r.user_prompt, title))
            return r.draw_ui;
    }
    return true;
}

ScriptRegistry::ScriptRegistry(std::filesystem::path path) : path_(std::move(path))
{
    records_ = registry_load(path_);
}

std::vector<ScriptRecord> ScriptRegistry::records() const
{
    std::lock_guard lock(mu_);
    return records_;
}

std::optional<ScriptRecord> ScriptRegistry::find(std::string_view title) const
{
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
        if (same_title(r.user_prompt, title))
            return r;
    }
    return std::nullopt;
}

bool ScriptRegistry::should_draw(std::string_view title) const
{
    std::lock_guard lock(mu_);
    return agent::should_draw(records_, title);
}

void ScriptRegistry::upsert(ScriptRecord record)
{
    std::lock_guard lock(mu_);
    auto next = records_;
    const std::string title = record.user_prompt;
    upsert_record(next, std::move(record));
    registry_save(path_, next);
    records_ = std::move(next);
    last_upserted_ = title;
}

bool ScriptRegistry::set_draw_ui(std::string_view title, bool value)
{
    std::lock_guard lock(mu_);
    auto next = records_;
    auto it = std::find_if(next.begin(), next.end(),
                           [&](const ScriptRecord& r) { return same_title(r.user_prompt, title); });
    if (it == next.end())
        return false;
    it->draw_ui = value;
    registry_save(path_, next);
    records_ = std::move(next);
    return true;
}

std::optional<ScriptRecord> ScriptRegistry::previous() const
{
    std::lock_guard lock(mu_);
    if (last_upserted_) {
        for (const auto& r : records_) {
            if (same_title(r.user_prompt, *last_upserted_))
                return r;
        }
    }
    if (records_.empty())
        return std::nullopt;
    return records_.back();
}

void ScriptRegistry::reload()
{
    auto fresh = registry_load(path_);
    std::lock_guard lock(mu_);
    records_ = std::move(fresh);
}

} // namespace sono::agent
