#include "sono/agent/transport.hpp"

#include "sono/agent/digest.hpp"
#include "sono/common/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sono::agent {

void AgentConfig::validate() const
{
    if (max_repair_iterations < 0)
        throw InputError("max_repair_iterations must not be negative");
    if (request_timeout.count() <= 0)
        throw InputError("request timeout must be positive");
    if (mode == Mode::Live) {
        if (endpoint.empty())
            throw InputError("live agent mode needs an endpoint URL");
        if (model_id.empty())
            throw InputError("live agent mode needs a model id");
    } else if (mock_fixture_dir.empty()) {
        throw InputError("mock agent mode needs a fixture directory");
    }
}

MockTransport::MockTransport(std::filesystem::path fixture_dir) : dir_(std::move(fixture_dir))
{
    if (!std::filesystem::is_directory(dir_))
        throw InputError("mock fixture directory not found: " + dir_.string());
}

std::string MockTransport::complete(const ChatRequest& request)
{
    {
        std::lock_guard lock(mu_);
        calls_.push_back(request.agent);
    }
    const auto agent_dir = dir_ / request.agent;
    auto path = agent_dir / (sha256_hex(request.user) + ".txt");
    if (!std::filesystem::exists(path))
        path = agent_dir / "default.txt";
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw TransportError("no mock reply for agent '" + request.agent + "' in " + agent_dir.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> MockTransport::calls() const
{
    std::lock_guard lock(mu_);
    return calls_;
}

HttpTransport::HttpTransport(const AgentConfig& config)
    : model_(config.model_id), api_key_env_(config.api_key_env), timeout_(config.request_timeout)
{
    const auto scheme_end = config.endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw InputError("endpoint must be an absolute http(s) URL: " + config.endpoint);
    const auto path_start = config.endpoint.find('/', scheme_end + 3);
    base_ = config.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config.endpoint.substr(path_start);
}

std::string HttpTransport::request_body(const ChatRequest& request) const
{
    nlohmann::ordered_json body;
    body["model"] = model_;
    body["messages"] = nlohmann::ordered_json::array({
        {{"role", "system"}, {"content", request.system}},
        {{"role", "user"}, {"content", request.user}},
    });
    body["temperature"] = 0;
    return body.dump();
}

std::string HttpTransport::complete(const ChatRequest& request)
{
    httplib::Client client(base_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (const char* key = std::getenv(api_key_env_.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(path_, headers, request_body(request), "application/json");
    if (!res)
        throw TransportError("request to " + base_ + path_ + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("chat service answered HTTP " + std::to_string(res->status));
    try {
        const auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("unexpected chat service reply: ") + e.what());
    }
}

std::unique_ptr<Transport> make_transport(const AgentConfig& config)
{
    config.validate();
    if (config.mode == AgentConfig::Mode::Mock)
        return std::make_unique<MockTransport>(config.mock_fixture_dir);
    return std::make_unique<HttpTransport>(config);
}

} // namespace sono::agent
