#include "sono/common/error.hpp"
#include "sono/hub/hub.hpp"
#include "sono/hub/server.hpp"
#include "sono/hub/wire.hpp"

#include "schema_check.hpp"
#include "test_support.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <mutex>
#include <set>

using namespace sono;
using namespace sono::hub;
namespace sh = sono::script::shape;

namespace {

std::vector<WireMessage> sample_messages()
{
    using script::Color;
    using script::Vec2;
    FrameMsg frame{7, 233, {}};
    frame.scripts.push_back(FrameScript{
        "all shapes",
        {sh::Rect{{0.5, -0.25}, 2.0, 0.5, 0.1, Color{1, 0, 0, 1}},
         sh::Disc{{1, 2}, 0.75, Color{0, 1, 0, 0.5}},
         sh::Ring{{0, 0}, 3, 0.2, Color{0, 0, 1, 1}},
         sh::Arc{{0, 0}, 1, 0.1, 0.0, 1.5, Color{0.2, 0.3, 0.4, 1}},
         sh::Line{{0, 0}, {1, 1}, 0.05, Color{1, 1, 1, 1}},
         sh::Polyline{{{0, 0}, {1, 0}, {1, 1}}, 0.02, Color{0.5, 0.5, 0.5, 1}},
         sh::Polygon{{{0, 0}, {1, 0}, {0, 1}}, Color{0, 0, 0, 1}},
         sh::Triangle{{0, 0}, {1, 0}, {0, 1}, Color{0.1, 0.2, 0.3, 0.4}},
         sh::RegularPolygon{{0, 0}, 6, 1.0, 0.5, Color{1, 0.5, 0, 1}}}});
    frame.scripts.push_back(FrameScript{"empty", {}});

    return {
        FeaturesMsg{1, 10, 440.0, 5.159, 0.35},
        FeaturesMsg{2, 20, std::nullopt, 0.0, 0.0},
        frame,
        FrameMsg{0, 0, {}},
        ScriptListMsg{{{"a wave", "title \"a wave\"\n", true}, {"Volume Bar", "x", false}}},
        ScriptListMsg{},
        AuthorStatusMsg{"generate", "drafting"},
        AuthorStatusMsg{"failed", "busy"},
        DiagnosticsMsg{std::string("a wave"),
                       {script::Diagnostic::error(script::DiagCode::Type, {3, 9}, "expects number"),
                        script::Diagnostic::warning(script::DiagCode::SizeRange, {4, 1}, "size out of range")}},
        DiagnosticsMsg{std::nullopt, {}},
        ErrorMsg{"bad"},
        AuthorMsg{"a wave"},
        SetDrawUiMsg{"Volume Bar", false},
        ListScriptsMsg{},
        SubscribeMsg{false, true},
    };
}

class FakeController final : public Controller {
public:
    bool start_authoring(ClientId client, const std::string& prompt) override
    {
        authored.emplace_back(client, prompt);
        return accept_author;
    }
    bool set_draw_ui(const std::string& title, bool value) override
    {
        for (auto& r : records) {
            if (agent::same_title(r.user_prompt, title)) {
                r.draw_ui = value;
                return true;
            }
        }
        return false;
    }
    std::vector<agent::ScriptRecord> list_scripts() override { return records; }

    bool accept_author = true;
    std::vector<std::pair<ClientId, std::string>> authored;
    std::vector<agent::ScriptRecord> records{{"Volume Bar", "x", true}};
};

std::vector<WireMessage> drain(Hub& hub, ClientId id)
{
    std::vector<WireMessage> out;
    while (auto p = hub.pop(id))
        out.push_back(decode(*p));
    return out;
}

} // namespace

TEST_CASE("every wire message survives encode and decode")
{
    for (const auto& msg : sample_messages()) {
        CAPTURE(message_type(msg));
        const auto text = encode(msg);
        const auto back = decode(text);
        CHECK(back == msg);
        CHECK(encode(back) == text);
        CHECK(nlohmann::json::parse(text)["type"] == std::string(message_type(msg)));
    }
}

TEST_CASE("encoded messages conform to the published schema")
{
    const test::SchemaCheck schema(nlohmann::json::parse(test::read_text(test::source_dir() / "docs" / "wire_schema.json")));
    std::set<std::size_t> kinds;
    for (const auto& msg : sample_messages()) {
        kinds.insert(msg.index());
        CAPTURE(message_type(msg));
        CHECK(schema.validate(nlohmann::json::parse(encode(msg))) == "");
    }
    CHECK(kinds.size() == std::variant_size_v<WireMessage>);

    CHECK(schema.validate(nlohmann::json::parse(R"({"type":"author","prompt":"x","extra":1})")) != "");
    CHECK(schema.validate(nlohmann::json::parse(R"({"type":"set_draw_ui","title":"x"})")) != "");
    CHECK(schema.validate(nlohmann::json::parse(
              R"({"type":"frame","frame_seq":1,"t_ms":0,"scripts":[{"title":"a","commands":[{"kind":"disc","center":[0,0],"color":[1,1,1,1]}]}]})")) != "");
}

TEST_CASE("message kinds split by direction")
{
    int client = 0;
    for (const auto& msg : sample_messages())
        client += is_client_message(msg) ? 1 : 0;
    CHECK(client == 4);
    CHECK(is_client_message(AuthorMsg{"x"}));
    CHECK_FALSE(is_client_message(FrameMsg{}));
}

TEST_CASE("features carry null for silence")
{
    const auto j = nlohmann::json::parse(encode(FeaturesMsg{3, 30, std::nullopt, 0.0, 0.0}));
    CHECK(j["dominant_hz"].is_null());
    CHECK(j["seq"] == 3);
}

TEST_CASE("malformed payloads raise protocol errors")
{
    const char* bad[] = {
        "not json",
        "[1,2]",
        R"({"kind":"author"})",
        R"({"type":"nope"})",
        R"({"type":"author"})",
        R"({"type":"author","prompt":"   "})",
        R"({"type":"author","prompt":5})",
        R"({"type":"set_draw_ui","title":"x"})",
        R"({"type":"set_draw_ui","title":"x","value":"yes"})",
        R"({"type":"subscribe","features":1,"frames":true})",
        R"({"type":"features","seq":-1,"t_ms":0,"dominant_hz":null,"norm":0,"rms":0})",
        R"({"type":"features","seq":1,"t_ms":0,"dominant_hz":"a","norm":0,"rms":0})",
        R"({"type":"frame","frame_seq":1,"t_ms":0,"scripts":[{"title":"a","commands":[{"kind":"blob"}]}]})",
        R"({"type":"author_status","phase":"thinking","detail":""})",
        R"({"type":"script_list","records":[{"userPrompt":"a"}]})",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(decode(text), ProtocolError);
    }
}

TEST_CASE("a full queue sheds the oldest stream message first")
{
    ClientQueue q(3);
    q.push(ClientQueue::Kind::Control, "c1");
    q.push(ClientQueue::Kind::Features, "f1");
    q.push(ClientQueue::Kind::Frame, "r1");
    q.push(ClientQueue::Kind::Features, "f2");
    CHECK(q.size() == 3);
    CHECK(q.dropped_features() == 1);
    q.push(ClientQueue::Kind::Control, "c2");
    CHECK(q.dropped_frames() == 1);
    CHECK(q.pop() == "c1");
    CHECK(q.pop() == "f2");
    CHECK(q.pop() == "c2");
    CHECK_FALSE(q.pop());
    CHECK_THROWS_AS(ClientQueue(0), InputError);
}

TEST_CASE("control messages are never dropped")
{
    ClientQueue q(2);
    q.push(ClientQueue::Kind::Control, "a");
    q.push(ClientQueue::Kind::Control, "b");
    q.push(ClientQueue::Kind::Frame, "dropped");
    q.push(ClientQueue::Kind::Control, "c");
    CHECK(q.size() == 3);
    CHECK(q.dropped_frames() == 1);
    CHECK(q.pop() == "a");
    CHECK(q.pop() == "b");
    CHECK(q.pop() == "c");
}

TEST_CASE("hub fans out and honours subscriptions")
{
    Hub hub;
    FakeController ctl;
    int wakes = 0;
    const auto a = hub.connect([&] { ++wakes; });
    const auto b = hub.connect();
    CHECK(hub.client_count() == 2);

    hub.broadcast(FeaturesMsg{1, 10, 440.0, 5.0, 0.1});
    hub.broadcast(FeaturesMsg{2, 20, 440.0, 5.0, 0.1});
    CHECK(wakes == 1);
    CHECK(drain(hub, a).size() == 2);
    hub.handle_text(b, R"({"type":"subscribe","features":false,"frames":true})", ctl);
    hub.broadcast(FeaturesMsg{3, 30, 440.0, 5.0, 0.1});
    hub.broadcast(FrameMsg{1, 33, {}});
    CHECK(drain(hub, a).size() == 2);
    const auto got = drain(hub, b);
    REQUIRE(got.size() == 3);
    CHECK(std::holds_alternative<FeaturesMsg>(got[0]));
    CHECK(std::holds_alternative<FeaturesMsg>(got[1]));
    CHECK(std::holds_alternative<FrameMsg>(got[2]));

    hub.disconnect(a);
    CHECK(hub.client_count() == 1);
    CHECK_FALSE(hub.pop(a));
    CHECK_FALSE(hub.stats(a));
    hub.send(a, ErrorMsg{"gone"});
}

TEST_CASE("hub turns commands into controller calls")
{
    Hub hub;
    FakeController ctl;
    const auto a = hub.connect();
    const auto b = hub.connect();

    hub.handle_text(a, R"({"type":"author","prompt":"a wave"})", ctl);
    REQUIRE(ctl.authored.size() == 1);
    CHECK(ctl.authored[0] == std::pair<ClientId, std::string>{a, "a wave"});
    CHECK(drain(hub, a).empty());

    ctl.accept_author = false;
    hub.handle_text(a, R"({"type":"author","prompt":"again"})", ctl);
    auto busy = drain(hub, a);
    REQUIRE(busy.size() == 1);
    CHECK(std::get<AuthorStatusMsg>(busy[0]) == AuthorStatusMsg{"failed", "busy"});

    hub.handle_text(a, R"({"type":"set_draw_ui","title":"volume BAR","value":false})", ctl);
    CHECK_FALSE(ctl.records[0].draw_ui);
    for (auto id : {a, b}) {
        auto list = drain(hub, id);
        REQUIRE(list.size() == 1);
        CHECK(std::get<ScriptListMsg>(list[0]).records == ctl.records);
    }

    hub.handle_text(a, R"({"type":"set_draw_ui","title":"nothing","value":false})", ctl);
    auto diag = drain(hub, a);
    REQUIRE(diag.size() == 1);
    const auto& d = std::get<DiagnosticsMsg>(diag[0]);
    CHECK(d.title == "nothing");
    REQUIRE(d.items.size() == 1);
    CHECK(d.items[0].code == script::DiagCode::UndefinedVar);
    CHECK(drain(hub, b).empty());

    hub.handle_text(b, R"({"type":"list_scripts"})", ctl);
    CHECK(drain(hub, b).size() == 1);
    CHECK(drain(hub, a).empty());

    hub.handle_text(b, R"({"type":"frame","frame_seq":1,"t_ms":0,"scripts":[]})", ctl);
    hub.handle_text(b, "garbage", ctl);
    auto errors = drain(hub, b);
    REQUIRE(errors.size() == 2);
    CHECK(std::holds_alternative<ErrorMsg>(errors[0]));
    CHECK(std::holds_alternative<ErrorMsg>(errors[1]));
    CHECK(hub.client_count() == 2);
}

TEST_CASE("hub reports queue statistics")
{
    Hub hub;
    const auto a = hub.connect();
    for (int i = 0; i < 100; ++i)
        hub.broadcast(FrameMsg{static_cast<std::uint64_t>(i), i, {}});
    const auto s = hub.stats(a);
    REQUIRE(s);
    CHECK(s->queued == 64);
    CHECK(s->dropped_frames == 36);
    auto first = decode(*hub.pop(a));
    CHECK(std::get<FrameMsg>(first).frame_seq == 36);
}

TEST_CASE("mime types by extension")
{
    CHECK(mime_type("index.html").starts_with("text/html"));
    CHECK(mime_type("app.js").starts_with("text/javascript"));
    CHECK(mime_type("style.css").starts_with("text/css"));
    CHECK(mime_type("schema.json").starts_with("application/json"));
    CHECK(mime_type("blob.bin") == "application/octet-stream");
}

TEST_CASE("server streams over websocket and serves static files")
{
    namespace beast = boost::beast;
    namespace ws = beast::websocket;
    namespace asio = boost::asio;

    test::TempDir web("web");
    {
        std::ofstream(web.path() / "index.html") << "<html>ui</html>";
        std::ofstream(web.path() / "app.js") << "console.log(1)";
    }
    {
        std::ofstream(web.path().parent_path() / "sono-secret.txt") << "secret";
    }

    Hub hub;
    FakeController ctl;
    WsServer server(hub, ctl, ServerOptions{"127.0.0.1", 0, web.path(), std::chrono::seconds(30)});
    server.start();
    const auto port = server.port();
    REQUIRE(port != 0);

    httplib::Client http("127.0.0.1", port);
    auto index = http.Get("/");
    REQUIRE(index);
    CHECK(index->status == 200);
    CHECK(index->body == "<html>ui</html>");
    CHECK(index->get_header_value("Content-Type").starts_with("text/html"));
    auto js = http.Get("/app.js");
    REQUIRE(js);
    CHECK(js->get_header_value("Content-Type").starts_with("text/javascript"));
    auto missing = http.Get("/nope.css");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto escape = http.Get("/../sono-secret.txt");
    REQUIRE(escape);
    CHECK(escape->status == 400);
    std::filesystem::remove(web.path().parent_path() / "sono-secret.txt");

    asio::io_context ioc;
    asio::ip::tcp::resolver resolver(ioc);
    ws::stream<asio::ip::tcp::socket> socket(ioc);
    asio::connect(socket.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    socket.handshake("127.0.0.1", "/stream");

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    while (hub.client_count() == 0 && std::chrono::steady_clock::now() < deadline)
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    REQUIRE(hub.client_count() == 1);

    auto read_one = [&] {
        beast::flat_buffer buf;
        socket.read(buf);
        return decode(beast::buffers_to_string(buf.data()));
    };

    socket.text(true);
    socket.write(asio::buffer(std::string(R"({"type":"list_scripts"})")));
    auto list = read_one();
    REQUIRE(std::holds_alternative<ScriptListMsg>(list));
    CHECK(std::get<ScriptListMsg>(list).records == ctl.records);

    hub.broadcast(FeaturesMsg{5, 50, 440.0, 5.159, 0.3});
    CHECK(std::get<FeaturesMsg>(read_one()) == FeaturesMsg{5, 50, 440.0, 5.159, 0.3});

    socket.write(asio::buffer(std::string("{oops")));
    CHECK(std::holds_alternative<ErrorMsg>(read_one()));

    socket.close(ws::close_code::normal);
    const auto gone = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    while (hub.client_count() != 0 && std::chrono::steady_clock::now() < gone)
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    CHECK(hub.client_count() == 0);
    server.stop();
}

TEST_CASE("server refuses a port already in use")
{
    Hub hub;
    FakeController ctl;
    WsServer first(hub, ctl, ServerOptions{"127.0.0.1", 0, {}, std::chrono::seconds(30)});
    first.start();
    WsServer second(hub, ctl, ServerOptions{"127.0.0.1", first.port(), {}, std::chrono::seconds(30)});
    CHECK_THROWS_AS(second.start(), IoError);
    first.stop();
}
