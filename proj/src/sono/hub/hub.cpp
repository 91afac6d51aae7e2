#include "sono/hub/hub.hpp"

#include "sono/common/error.hpp"

#include <algorithm>

namespace sono::hub {
namespace {

ClientQueue::Kind kind_of(const WireMessage& msg)
{
    if (std::holds_alternative<FeaturesMsg>(msg))
        return ClientQueue::Kind::Features;
    if (std::holds_alternative<FrameMsg>(msg))
        return ClientQueue::Kind::Frame;
    return ClientQueue::Kind::Control;
}

} // namespace

ClientQueue::ClientQueue(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw InputError("queue capacity must be positive");
}

void ClientQueue::count_drop(Kind kind)
{
    if (kind == Kind::Features)
        ++dropped_features_;
    else if (kind == Kind::Frame)
        ++dropped_frames_;
}

void ClientQueue::push(Kind kind, std::string payload)
{
    if (items_.size() >= capacity_) {
        auto victim = std::find_if(items_.begin(), items_.end(), [](const Item& i) { return i.kind != Kind::Control; });
        if (victim != items_.end()) {
            count_drop(victim->kind);
            items_.erase(victim);
        } else if (kind != Kind::Control) {
            count_drop(kind);
            return;
        }
    }
    items_.push_back(Item{kind, std::move(payload)});
}

std::optional<std::string> ClientQueue::pop()
{
    if (items_.empty())
        return std::nullopt;
    std::string out = std::move(items_.front().payload);
    items_.pop_front();
    return out;
}

ClientId Hub::connect(std::function<void()> wake)
{
    std::lock_guard lock(mu_);
    const ClientId id = next_id_++;
    clients_.emplace(id, Client{ClientQueue(), true, true, std::move(wake)});
    return id;
}

void Hub::disconnect(ClientId client)
{
    std::lock_guard lock(mu_);
    clients_.erase(client);
}

void Hub::enqueue(Client& client, ClientQueue::Kind kind, const std::string& payload,
                  std::vector<std::function<void()>>& wakes)
{
    const bool was_empty = client.queue.size() == 0;
    client.queue.push(kind, payload);
    if (was_empty && client.queue.size() > 0 && client.wake)
        wakes.push_back(client.wake);
}

void Hub::broadcast(const WireMessage& msg)
{
    const auto kind = kind_of(msg);
    std::vector<std::function<void()>> wakes;
    {
        std::lock_guard lock(mu_);
        if (clients_.empty())
            return;
        const std::string payload = encode(msg);
        for (auto& [id, client] : clients_) {
            if ((kind == ClientQueue::Kind::Features && !client.features) ||
                (kind == ClientQueue::Kind::Frame && !client.frames))
                continue;
            enqueue(client, kind, payload, wakes);
        }
    }
    for (auto& w : wakes)
        w();
}

void Hub::send(ClientId client, const WireMessage& msg)
{
    std::vector<std::function<void()>> wakes;
    {
        std::lock_guard lock(mu_);
        auto it = clients_.find(client);
        if (it == clients_.end())
            return;
        enqueue(it->second, kind_of(msg), encode(msg), wakes);
    }
    for (auto& w : wakes)
        w();
}

std::optional<std::string> Hub::pop(ClientId client)
{
    std::lock_guard lock(mu_);
    auto it = clients_.find(client);
    if (it == clients_.end())
        return std::nullopt;
    return it->second.queue.pop();
}

void Hub::handle_text(ClientId client, std::string_view payload, Controller& controller)
{
    WireMessage msg;
    try {
        msg = decode(payload);
    } catch (const ProtocolError& e) {
        send(client, ErrorMsg{e.what()});
        return;
    }
    handle_command(client, msg, controller);
}

void Hub::handle_command(ClientId client, const WireMessage& msg, Controller& controller)
{
    if (const auto* m = std::get_if<AuthorMsg>(&msg)) {
        if (!controller.start_authoring(client, m->prompt))
            send(client, AuthorStatusMsg{"failed", "busy"});
    } else if (const auto* m = std::get_if<SetDrawUiMsg>(&msg)) {
        if (!controller.set_draw_ui(m->title, m->value)) {
            send(client, DiagnosticsMsg{m->title,
                                        {script::Diagnostic::error(script::DiagCode::UndefinedVar, {1, 1},
                                                                   "no script titled '" + m->title + "'")}});
        } else {
            broadcast(ScriptListMsg{controller.list_scripts()});
        }
    } else if (std::holds_alternative<ListScriptsMsg>(msg)) {
        send(client, ScriptListMsg{controller.list_scripts()});
    } else if (const auto* m = std::get_if<SubscribeMsg>(&msg)) {
        std::lock_guard lock(mu_);
        if (auto it = clients_.find(client); it != clients_.end()) {
            it->second.features = m->features;
            it->second.frames = m->frames;
        }
    } else {
        send(client, ErrorMsg{"message type '" + std::string(message_type(msg)) + "' is sent by the server only"});
    }
}

std::optional<ClientStats> Hub::stats(ClientId client) const
{
    std::lock_guard lock(mu_);
    auto it = clients_.find(client);
    if (it == clients_.end())
        return std::nullopt;
    const auto& q = it->second.queue;
    return ClientStats{q.size(), q.dropped_features(), q.dropped_frames()};
}

std::size_t Hub::client_count() const
{
    std::lock_guard lock(mu_);
    return clients_.size();
}

} // namespace sono::hub
