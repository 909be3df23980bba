#pragma once

#include <memory>
#include <string>

#include "mentalgen/service/service.hpp"
#include "mentalgen/service/tcp_server.hpp"

namespace mentalgen::service {

/// HTTP/1.1 and WebSocket transport for a Service on one port.
class HttpServer {
 public:
  HttpServer(Service& svc, const std::string& listen);
  ~HttpServer();

  std::uint16_t port() const noexcept { return server_->port(); }
  std::string address() const { return server_->address(); }
  void stop();

 private:
  Service& svc_;
  std::unique_ptr<TcpServer> server_;
};

}  // namespace mentalgen::service
