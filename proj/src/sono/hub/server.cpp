#include "sono/hub/server.hpp"

#include "sono/common/error.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace sono::hub {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr std::string_view kStreamPath = "/stream";
constexpr std::size_t kMaxRequestBody = 64 * 1024;
constexpr auto kHttpTimeout = std::chrono::seconds(30);

std::string path_of(beast::string_view target)
{
    const std::string_view t(target.data(), target.size());
    return std::string(t.substr(0, t.find('?')));
}

} // namespace

std::string_view mime_type(const std::filesystem::path& path)
{
    const std::string ext = path.extension().string();
    if (ext == ".html" || ext == ".htm")
        return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs")
        return "text/javascript; charset=utf-8";
    if (ext == ".css")
        return "text/css; charset=utf-8";
    if (ext == ".json")
        return "application/json";
    if (ext == ".svg")
        return "image/svg+xml";
    if (ext == ".png")
        return "image/png";
    if (ext == ".ico")
        return "image/x-icon";
    if (ext == ".txt" || ext == ".md")
        return "text/plain; charset=utf-8";
    return "application/octet-stream";
}

struct WsServer::Impl {
    Impl(Hub& h, Controller& c, ServerOptions o) : hub(h), controller(c), options(std::move(o)) {}

    class WsSession;
    class HttpSession;

    void accept();

    Hub& hub;
    Controller& controller;
    ServerOptions options;
    net::io_context ioc{1};
    std::optional<tcp::acceptor> acceptor;
    std::thread thread;
    std::uint16_t bound_port = 0;

    std::mutex sessions_mu;
    std::vector<std::weak_ptr<WsSession>> sessions;
};

class WsServer::Impl::WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, Impl& impl) : ws_(std::move(socket)), impl_(impl) {}

    ~WsSession()
    {
        if (id_ != 0)
            impl_.hub.disconnect(id_);
    }

    void run(http::request<http::string_body> req)
    {
        beast::get_lowest_layer(ws_).expires_never();
        websocket::stream_base::timeout timeouts = websocket::stream_base::timeout::suggested(beast::role_type::server);
        timeouts.idle_timeout = impl_.options.idle_timeout;
        timeouts.keep_alive_pings = true;
        ws_.set_option(timeouts);
        ws_.read_message_max(kMaxRequestBody);
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
    }

    ClientId id() const { return id_; }

private:
    void on_accept(beast::error_code ec)
    {
        if (ec)
            return;
        std::weak_ptr<WsSession> weak = shared_from_this();
        auto executor = ws_.get_executor();
        id_ = impl_.hub.connect([weak, executor] {
            net::post(executor, [weak] {
                if (auto self = weak.lock())
                    self->flush();
            });
        });
        {
            std::lock_guard lock(impl_.sessions_mu);
            impl_.sessions.push_back(weak);
        }
        read();
        flush();
    }

    void read()
    {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec)
                return;
            const std::string payload = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->impl_.hub.handle_text(self->id_, payload, self->impl_.controller);
            self->read();
        });
    }

    void flush()
    {
        if (writing_)
            return;
        auto next = impl_.hub.pop(id_);
        if (!next)
            return;
        writing_ = true;
        outgoing_ = std::move(*next);
        ws_.text(true);
        ws_.async_write(net::buffer(outgoing_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->writing_ = false;
            if (!ec)
                self->flush();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    Impl& impl_;
    beast::flat_buffer buffer_;
    ClientId id_ = 0;
    bool writing_ = false;
    std::string outgoing_;
};

class WsServer::Impl::HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Impl& impl) : stream_(std::move(socket)), impl_(impl) {}

    void run() { read(); }

private:
    void read()
    {
        parser_.emplace();
        parser_->body_limit(kMaxRequestBody);
        stream_.expires_after(kHttpTimeout);
        http::async_read(stream_, buffer_, *parser_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec)
    {
        if (ec)
            return;
        auto req = parser_->release();
        if (websocket::is_upgrade(req)) {
            if (path_of(req.target()) == kStreamPath) {
                std::make_shared<WsSession>(stream_.release_socket(), impl_)->run(std::move(req));
                return;
            }
            respond(error_response(req, http::status::not_found, "websocket endpoint is " + std::string(kStreamPath)));
            return;
        }
        respond(static_response(req));
    }

    http::response<http::string_body> error_response(const http::request<http::string_body>& req,
                                                     http::status status, std::string text)
    {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::content_type, "text/plain; charset=utf-8");
        res.keep_alive(req.keep_alive());
        res.body() = std::move(text);
        res.prepare_payload();
        return res;
    }

    http::response<http::string_body> static_response(const http::request<http::string_body>& req)
    {
        if (req.method() != http::verb::get && req.method() != http::verb::head)
            return error_response(req, http::status::method_not_allowed, "only GET and HEAD are served");
        if (impl_.options.web_root.empty())
            return error_response(req, http::status::not_found, "no web root configured");
        std::string path = path_of(req.target());
        if (path.empty() || path.front() != '/' || path.find("..") != std::string::npos)
            return error_response(req, http::status::bad_request, "illegal request target");
        if (path.back() == '/')
            path += "index.html";
        const auto file = impl_.options.web_root / path.substr(1);
        std::ifstream in(file, std::ios::binary);
        if (!in || std::filesystem::is_directory(file))
            return error_response(req, http::status::not_found, "not found: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();

        http::response<http::string_body> res{http::status::ok, req.version()};
        res.set(http::field::content_type, std::string(mime_type(file)));
        res.keep_alive(req.keep_alive());
        res.body() = ss.str();
        res.prepare_payload();
        if (req.method() == http::verb::head)
            res.body().clear();
        return res;
    }

    void respond(http::response<http::string_body> res)
    {
        auto shared = std::make_shared<http::response<http::string_body>>(std::move(res));
        http::async_write(stream_, *shared, [self = shared_from_this(), shared](beast::error_code ec, std::size_t) {
            if (ec)
                return;
            if (shared->keep_alive()) {
                self->read();
            } else {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
            }
        });
    }

    beast::tcp_stream stream_;
    Impl& impl_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
};

void WsServer::Impl::accept()
{
    acceptor->async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec)
            return;   // acceptor closed
        std::make_shared<HttpSession>(std::move(socket), *this)->run();
        accept();
    });
}

WsServer::WsServer(Hub& hub, Controller& controller, ServerOptions options)
    : impl_(std::make_unique<Impl>(hub, controller, std::move(options)))
{
}

WsServer::~WsServer()
{
    stop();
}

void WsServer::start()
{
    if (impl_->thread.joinable())
        return;
    try {
        const auto address = net::ip::make_address(impl_->options.address);
        tcp::endpoint endpoint{address, impl_->options.port};
        impl_->acceptor.emplace(impl_->ioc);
        impl_->acceptor->open(endpoint.protocol());
        impl_->acceptor->set_option(net::socket_base::reuse_address(true));
        impl_->acceptor->bind(endpoint);
        impl_->acceptor->listen(net::socket_base::max_listen_connections);
        impl_->bound_port = impl_->acceptor->local_endpoint().port();
    } catch (const boost::system::system_error& e) {
        impl_->acceptor.reset();
        throw IoError("cannot listen on " + impl_->options.address + ":" + std::to_string(impl_->options.port) +
                      ": " + e.what());
    }
    impl_->ioc.restart();
    impl_->accept();
    impl_->thread = std::thread([impl = impl_.get()] { impl->ioc.run(); });
}

void WsServer::stop()
{
    if (!impl_->thread.joinable())
        return;
    net::post(impl_->ioc, [impl = impl_.get()] {
        beast::error_code ignored;
        impl->acceptor->close(ignored);
    });
    impl_->ioc.stop();
    impl_->thread.join();
    std::lock_guard lock(impl_->sessions_mu);
    for (auto& weak : impl_->sessions) {
        if (auto s = weak.lock(); s && s->id() != 0)
            impl_->hub.disconnect(s->id());
    }
    impl_->sessions.clear();
}

std::uint16_t WsServer::port() const
{
    return impl_->bound_port;
}

} // namespace sono::hub
