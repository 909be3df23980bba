#include "mentalgen/gateway/stub_server.hpp"

#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "mentalgen/core/hash.hpp"
#include "mentalgen/gateway/artifact_store.hpp"
#include "mentalgen/gateway/wire.hpp"
#include "mentalgen/service/tcp_server.hpp"

namespace mentalgen::gateway {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = boost::asio::ip::tcp;

StubMode parse_stub_mode(std::string_view s) {
  if (s == "ok") return StubMode::ok;
  if (s == "silent") return StubMode::silent;
  if (s == "malformed") return StubMode::malformed;
  if (s == "error") return StubMode::error;
  throw InvalidArgument("unknown stub mode '" + std::string(s) + "' (ok, silent, malformed, error)");
}

std::string stub_image(std::uint64_t seed) {
  const std::string rgb{static_cast<char>(seed & 0xff), static_cast<char>((seed >> 8) & 0xff),
                        static_cast<char>((seed >> 16) & 0xff)};
  return encode_ppm(1, 1, rgb);
}

StubServer::StubServer(StubMode mode, std::uint16_t port, const std::string& address)
    : mode_(mode), requests_(std::make_shared<std::atomic<std::size_t>>(0)) {
  auto counter = requests_;
  server_ = std::make_unique<service::TcpServer>(address, port, [mode, counter](tcp::socket sock) {
    websocket::stream<tcp::socket> ws(std::move(sock));
    beast::error_code ec;
    ws.accept(ec);
    if (ec) return;
    ws.text(true);
    for (;;) {
      beast::flat_buffer buf;
      ws.read(buf, ec);
      if (ec) return;
      ++*counter;
      WireMessage in;
      try {
        in = decode(beast::buffers_to_string(buf.data()));
      } catch (const ParseError& e) {
        ws.write(boost::asio::buffer(encode({MessageType::error, "", {{"message", e.what()}}})), ec);
        continue;
      }
      switch (mode) {
        case StubMode::silent:
          break;
        case StubMode::malformed:
          ws.write(boost::asio::buffer(std::string("{\"this is\": not a wire message")), ec);
          break;
        case StubMode::error:
          ws.write(boost::asio::buffer(encode({MessageType::error, in.request_id, {{"message", "stub failure"}}})), ec);
          break;
        case StubMode::ok: {
          std::uint64_t seed = 0;
          try {
            seed = request_from_json(in.payload.at("request")).seed;
          } catch (const std::exception&) {
          }
          ws.write(boost::asio::buffer(encode({MessageType::progress, in.request_id, {{"fraction", 0.5}}})), ec);
          if (!ec)
            ws.write(boost::asio::buffer(encode(
                         {MessageType::result, in.request_id, {{"image_b64", base64_encode(stub_image(seed))}}})),
                     ec);
          break;
        }
      }
      if (ec) return;
    }
  });
}

StubServer::~StubServer() { stop(); }

std::uint16_t StubServer::port() const noexcept { return server_->port(); }

std::string StubServer::url() const {
  return "ws://" + server_->address() + ":" + std::to_string(server_->port()) + "/mentalgen";
}

std::size_t StubServer::connections() const noexcept { return server_->connections_accepted(); }

void StubServer::stop() {
  if (server_) server_->stop();
}

}  // namespace mentalgen::gateway
