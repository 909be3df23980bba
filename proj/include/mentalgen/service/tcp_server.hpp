#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>

namespace mentalgen::service {

/// Blocking accept loop with one thread per connection. stop() wakes the
/// acceptor, shuts down every open connection and joins all threads.
class TcpServer {
 public:
  using Handler = std::function<void(boost::asio::ip::tcp::socket)>;

  /// `address` is an IPv4/IPv6 literal; port 0 picks a free port.
  TcpServer(const std::string& address, std::uint16_t port, Handler handler);
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;
  ~TcpServer();

  std::uint16_t port() const noexcept { return port_; }
  const std::string& address() const noexcept { return address_; }
  std::size_t connections_accepted() const noexcept { return accepted_; }

  void stop();

 private:
  struct Connection {
    std::thread thread;
    int fd = -1;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap();

  boost::asio::io_context ioc_;
  boost::asio::ip::tcp::acceptor acceptor_;
  std::string address_;
  std::uint16_t port_ = 0;
  Handler handler_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> accepted_{0};
  std::mutex mutex_;
  std::list<std::unique_ptr<Connection>> connections_;
  std::thread acceptor_thread_;
};

/// Splits "host:port" (IPv6 hosts in brackets). Throws InvalidArgument.
std::pair<std::string, std::uint16_t> split_host_port(const std::string& s);

}  // namespace mentalgen::service
