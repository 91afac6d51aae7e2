#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sono::agent {

/// One persisted script. The prompt doubles as the script's title key.
struct ScriptRecord {
    std::string user_prompt;
    std::string script_content;
    bool draw_ui = true;

    friend bool operator==(const ScriptRecord&, const ScriptRecord&) = default;
};

/// ASCII case-insensitive equality, used for every title lookup.
bool same_title(std::string_view a, std::string_view b);

/// `{"scripts":[{"userPrompt":...,"scriptContent":...,"drawUI":...}]}`,
/// two-space indented.
std::string registry_to_json(const std::vector<ScriptRecord>& records);
/// Throws ParseError (with the byte offset for malformed JSON).
std::vector<ScriptRecord> registry_from_json(std::string_view text);

/// A missing file is an empty registry.
std::vector<ScriptRecord> registry_load(const std::filesystem::path& path);
/// Writes a sibling temp file and renames it over `path`.
void registry_save(const std::filesystem::path& path, const std::vector<ScriptRecord>& records);

/// Replaces the record whose title matches, else appends. Returns its index.
std::size_t upsert_record(std::vector<ScriptRecord>& records, ScriptRecord record);

/// Host-side draw gate: the record's drawUI, or true when no record matches.
bool should_draw(const std::vector<ScriptRecord>& records, std::string_view title);

/// File-backed registry shared by the session and the authoring pipeline.
/// Every mutation is persisted before it returns.
class ScriptRegistry {
public:
    explicit ScriptRegistry(std::filesystem::path path);

    const std::filesystem::path& path() const { return path_; }
    std::vector<ScriptRecord> records() const;
    std::optional<ScriptRecord> find(std::string_view title) const;
    bool should_draw(std::string_view title) const;

    void upsert(ScriptRecord record);
    /// False (and nothing written) when no record has that title.
    bool set_draw_ui(std::string_view title, bool value);

    /// The most recently upserted record, falling back to the last one on
    /// file; the generation agent's "previous" context.
    std::optional<ScriptRecord> previous() const;

    /// Re-reads the file.
    void reload();

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::vector<ScriptRecord> records_;
    std::optional<std::string> last_upserted_;
};

} // namespace sono::agent
