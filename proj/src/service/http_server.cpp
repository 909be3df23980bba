#include "mentalgen/service/http_server.hpp"

#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>

namespace mentalgen::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kBodyLimit = 64u << 20;

std::vector<std::string> path_parts(std::string_view target) {
  const auto q = target.find('?');
  if (q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < target.size()) {
    auto slash = target.find('/', pos);
    if (slash == std::string_view::npos) slash = target.size();
    if (slash > pos) out.emplace_back(target.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return out;
}

void write_reply(tcp::socket& sock, const Reply& r, unsigned version, bool keep_alive, beast::error_code& ec) {
  http::response<http::string_body> res{static_cast<http::status>(r.status), version};
  res.set(http::field::server, "mentalgen");
  res.set(http::field::content_type, r.content_type);
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(keep_alive);
  res.body() = r.body;
  res.prepare_payload();
  http::write(sock, res, ec);
}

void serve_stream(Service& svc, websocket::stream<tcp::socket>& ws, const std::string& id) {
  auto intake = svc.open_stream(id);
  ws.text(true);
  beast::error_code ec;
  for (;;) {
    beast::flat_buffer buf;
    ws.read(buf, ec);
    if (ec) return;
    const StreamOutcome out = intake->on_message(beast::buffers_to_string(buf.data()));
    for (const auto& r : out.replies) {
      ws.write(net::buffer(r), ec);
      if (ec) return;
    }
    if (out.close) {
      ws.close(websocket::close_reason(static_cast<websocket::close_code>(out.close->first), out.close->second), ec);
      // Drain until the peer's close frame arrives.
      while (!ec) {
        beast::flat_buffer drain;
        ws.read(drain, ec);
      }
      return;
    }
  }
}

struct EventsConnection : std::enable_shared_from_this<EventsConnection> {
  explicit EventsConnection(tcp::socket s) : ws(std::move(s)) {}

  websocket::stream<tcp::socket> ws;
  beast::flat_buffer read_buf;
  std::deque<std::string> queue;
  bool writing = false;
  bool closed = false;

  void read() {
    ws.async_read(read_buf, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed = true;
        beast::error_code ignored;
        beast::get_lowest_layer(self->ws).cancel(ignored);
        return;
      }
      self->read_buf.consume(self->read_buf.size());
      self->read();
    });
  }

  void push(std::string text) {
    if (closed) return;
    queue.push_back(std::move(text));
    if (!writing) write_next();
  }

  void write_next() {
    if (queue.empty() || closed) {
      writing = false;
      return;
    }
    writing = true;
    ws.async_write(net::buffer(queue.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->queue.pop_front();
      if (ec) {
        self->closed = true;
        self->writing = false;
        return;
      }
      self->write_next();
    });
  }
};

void serve_events(Service& svc, tcp::socket sock, const http::request<http::string_body>& req, const std::string& id) {
  net::io_context ioc;
  const auto protocol = sock.local_endpoint().protocol();
  tcp::socket own(ioc, protocol, sock.release());
  auto conn = std::make_shared<EventsConnection>(std::move(own));
  beast::error_code ec;
  conn->ws.accept(req, ec);
  if (ec) return;
  conn->ws.text(true);
  const auto token = svc.subscribe(id, [&ioc, conn](const std::string& text) {
    net::post(ioc, [conn, text] { conn->push(text); });
  });
  conn->read();
  ioc.run();
  svc.unsubscribe(token);
}

void serve_connection(Service& svc, tcp::socket sock) {
  beast::flat_buffer buffer;
  beast::error_code ec;
  for (;;) {
    http::request_parser<http::string_body> parser;
    parser.body_limit(kBodyLimit);
    http::read(sock, buffer, parser, ec);
    if (ec) break;
    auto req = parser.release();

    if (websocket::is_upgrade(req)) {
      const auto parts = path_parts(std::string_view(req.target().data(), req.target().size()));
      const bool ws_route = parts.size() == 4 && parts[0] == "v1" && parts[1] == "sessions" &&
                            (parts[3] == "stream" || parts[3] == "events");
      if (!ws_route) {
        write_reply(sock, {404, R"({"error":{"code":"not_found","message":"no such websocket route"}})"},
                    req.version(), false, ec);
        break;
      }
      try {
        svc.engine().get(parts[2]);
      } catch (const std::exception& e) {
        write_reply(sock, error_reply(e), req.version(), false, ec);
        break;
      }
      if (parts[3] == "events") {
        serve_events(svc, std::move(sock), req, parts[2]);
        return;
      }
      websocket::stream<tcp::socket> ws(std::move(sock));
      ws.accept(req, ec);
      if (!ec) serve_stream(svc, ws, parts[2]);
      return;
    }

    const Reply r = svc.handle(std::string(req.method_string()), std::string(req.target()), req.body());
    write_reply(sock, r, req.version(), req.keep_alive(), ec);
    if (ec || !req.keep_alive()) break;
  }
  sock.shutdown(tcp::socket::shutdown_send, ec);
}

}  // namespace

HttpServer::HttpServer(Service& svc, const std::string& listen) : svc_(svc) {
  const auto [host, port] = split_host_port(listen);
  server_ = std::make_unique<TcpServer>(host, port, [this](tcp::socket s) { serve_connection(svc_, std::move(s)); });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace mentalgen::service
