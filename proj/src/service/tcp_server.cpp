#include "mentalgen/service/tcp_server.hpp"

#include <sys/socket.h>

#include <charconv>

#include "mentalgen/core/error.hpp"

namespace mentalgen::service {

namespace net = boost::asio;
using tcp = net::ip::tcp;

std::pair<std::string, std::uint16_t> split_host_port(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon + 1 == s.size()) throw InvalidArgument("expected host:port, got '" + s + "'");
  std::string host = s.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  unsigned port = 0;
  const char* first = s.data() + colon + 1;
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, port);
  if (ec != std::errc{} || p != last || port > 65535) throw InvalidArgument("invalid port in '" + s + "'");
  if (host.empty()) throw InvalidArgument("missing host in '" + s + "'");
  return {host, static_cast<std::uint16_t>(port)};
}

TcpServer::TcpServer(const std::string& address, std::uint16_t port, Handler handler)
    : acceptor_(ioc_), handler_(std::move(handler)) {
  boost::system::error_code ec;
  const auto addr = net::ip::make_address(address, ec);
  if (ec) throw InvalidArgument("invalid listen address '" + address + "'");
  const tcp::endpoint ep(addr, port);
  acceptor_.open(ep.protocol());
  acceptor_.set_option(net::socket_base::reuse_address(true));
  acceptor_.bind(ep, ec);
  if (ec) throw Error("cannot bind " + address + ":" + std::to_string(port) + ": " + ec.message());
  acceptor_.listen(net::socket_base::max_listen_connections);
  address_ = address;
  port_ = acceptor_.local_endpoint().port();
  acceptor_thread_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::reap() {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if ((*it)->done) {
      (*it)->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void TcpServer::accept_loop() {
  while (!stopping_) {
    tcp::socket sock(ioc_);
    boost::system::error_code ec;
    acceptor_.accept(sock, ec);
    if (stopping_) break;
    if (ec) continue;
    ++accepted_;
    std::lock_guard lock(mutex_);
    reap();
    auto conn = std::make_unique<Connection>();
    Connection* raw = conn.get();
    raw->fd = sock.native_handle();
    raw->thread = std::thread([this, raw, s = std::move(sock)]() mutable {
      try {
        handler_(std::move(s));
      } catch (...) {
      }
      std::lock_guard l(mutex_);
      raw->fd = -1;
      raw->done = true;
    });
    connections_.push_back(std::move(conn));
  }
}

void TcpServer::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_thread_.joinable()) acceptor_thread_.join();
    return;
  }
  // Wake the blocking accept with a throwaway connection.
  {
    net::io_context ioc;
    tcp::socket s(ioc);
    boost::system::error_code ec;
    auto addr = acceptor_.local_endpoint().address();
    if (addr.is_unspecified()) addr = addr.is_v6() ? net::ip::address(net::ip::address_v6::loopback())
                                                   : net::ip::address(net::ip::address_v4::loopback());
    s.connect(tcp::endpoint(addr, port_), ec);
  }
  if (acceptor_thread_.joinable()) acceptor_thread_.join();
  boost::system::error_code ec;
  acceptor_.close(ec);
  std::list<std::unique_ptr<Connection>> conns;
  {
    std::lock_guard lock(mutex_);
    for (auto& c : connections_)
      if (c->fd >= 0) ::shutdown(c->fd, SHUT_RDWR);
    conns.swap(connections_);
  }
  for (auto& c : conns)
    if (c->thread.joinable()) c->thread.join();
}

}  // namespace mentalgen::service
