#pragma once

#include <atomic>
#include <memory>
#include <string>

namespace mentalgen::service {
class TcpServer;
}

namespace mentalgen::gateway {

/// Reply behavior of the stub generation server.
///   ok        progress then result with a 1x1 PPM per request
///   silent    reads requests, never replies
///   malformed replies with text that is not a wire message
///   error     replies with an error message per request
enum class StubMode { ok, silent, malformed, error };
StubMode parse_stub_mode(std::string_view s);

/// Loopback WebSocket server speaking the gateway wire schema.
class StubServer {
 public:
  explicit StubServer(StubMode mode, std::uint16_t port = 0, const std::string& address = "127.0.0.1");
  ~StubServer();

  std::uint16_t port() const noexcept;
  std::string url() const;
  std::size_t connections() const noexcept;
  std::size_t requests() const noexcept { return *requests_; }
  void stop();

 private:
  StubMode mode_;
  std::shared_ptr<std::atomic<std::size_t>> requests_;
  std::unique_ptr<service::TcpServer> server_;
};

/// The 1x1 image the stub returns for a request seed.
std::string stub_image(std::uint64_t seed);

}  // namespace mentalgen::gateway
