#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sono::agent {

struct AgentConfig {
    enum class Mode { Live, Mock };

    Mode mode = Mode::Mock;
    std::string endpoint;   // full URL of a chat-completions service
    std::string model_id;
    std::string api_key_env = "SONO_API_KEY";
    std::filesystem::path mock_fixture_dir;
    int max_repair_iterations = 3;
    std::chrono::milliseconds request_timeout{120'000};

    /// Throws InputError when required fields for the mode are missing.
    void validate() const;
};

struct ChatRequest {
    std::string agent;   // "enhance", "generate" or "check"
    std::string system;
    std::string user;
};

/// A failed exchange. Callers retry once before giving up.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Transport {
public:
    virtual ~Transport() = default;
    /// Returns the assistant text or throws TransportError.
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// Replies from files: `<dir>/<agent>/<sha256 of user message>.txt`, else
/// `<dir>/<agent>/default.txt`.
class MockTransport final : public Transport {
public:
    explicit MockTransport(std::filesystem::path fixture_dir);

    std::string complete(const ChatRequest& request) override;

    /// Agents called so far, in order.
    std::vector<std::string> calls() const;

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::vector<std::string> calls_;
};

/// POSTs {"model", "messages":[system, user], "temperature":0} and reads
/// choices[0].message.content.
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(const AgentConfig& config);

    std::string complete(const ChatRequest& request) override;

    /// Request body for `request`; exposed for documentation tests.
    std::string request_body(const ChatRequest& request) const;

private:
    std::string base_;   // scheme://host[:port]
    std::string path_;
    std::string model_;
    std::string api_key_env_;
    std::chrono::milliseconds timeout_;
};

std::unique_ptr<Transport> make_transport(const AgentConfig& config);

} // namespace sono::agent
