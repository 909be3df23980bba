#include "mentalgen/service/ws_client.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "mentalgen/core/error.hpp"

namespace mentalgen::service {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct WsClient::Impl {
  net::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};
  beast::flat_buffer buf;
  bool reading = false;
  bool done = false;
  beast::error_code ec;
};

WsClient::WsClient(const std::string& host, std::uint16_t port, const std::string& target)
    : impl_(std::make_unique<Impl>()) {
  beast::error_code ec;
  tcp::resolver resolver(impl_->ioc);
  const auto eps = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) net::connect(impl_->ws.next_layer(), eps, ec);
  if (!ec) impl_->ws.handshake(host + ":" + std::to_string(port), target, ec);
  if (ec) throw Error("websocket connect to " + host + ":" + std::to_string(port) + target + " failed: " + ec.message());
  impl_->ws.text(true);
}

WsClient::~WsClient() {
  try {
    close();
  } catch (...) {
  }
}

void WsClient::send(const std::string& text) {
  bool wrote = false;
  beast::error_code wec;
  impl_->ws.async_write(net::buffer(text), [&](beast::error_code e, std::size_t) {
    wec = e;
    wrote = true;
  });
  impl_->ioc.restart();
  while (!wrote && impl_->ioc.run_one() > 0) {
  }
  if (wec) throw Error("websocket send failed: " + wec.message());
}

std::optional<std::string> WsClient::receive(std::chrono::milliseconds timeout) {
  auto& m = *impl_;
  if (closed_) return std::nullopt;
  if (!m.reading) {
    m.buf.consume(m.buf.size());
    m.done = false;
    m.reading = true;
    m.ws.async_read(m.buf, [&m](beast::error_code e, std::size_t) {
      m.ec = e;
      m.done = true;
    });
  }
  if (!m.done) {
    m.ioc.restart();
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (!m.done && std::chrono::steady_clock::now() < deadline)
      if (m.ioc.run_one_until(deadline) == 0) break;
  }
  if (!m.done) return std::nullopt;
  m.reading = false;
  if (m.ec) {
    closed_ = CloseInfo{static_cast<std::uint16_t>(m.ws.reason().code), std::string(m.ws.reason().reason.c_str())};
    return std::nullopt;
  }
  return beast::buffers_to_string(m.buf.data());
}

void WsClient::close() {
  if (closed_ || !impl_->ws.is_open()) return;
  beast::error_code ec;
  bool done = false;
  impl_->ws.async_close(websocket::close_code::normal, [&](beast::error_code e) {
    ec = e;
    done = true;
  });
  impl_->ioc.restart();
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
  while (!done && impl_->ioc.run_one_until(deadline) > 0) {
  }
  closed_ = CloseInfo{static_cast<std::uint16_t>(websocket::close_code::normal), "client close"};
}

}  // namespace mentalgen::service
