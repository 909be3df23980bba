#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "mentalgen/core/error.hpp"
#include "mentalgen/gateway/stub_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mentalgen-stub: loopback generation server speaking the gateway wire schema"};
  std::string mode = "ok";
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;
  app.add_option("--mode", mode, "ok | silent | malformed | error")->capture_default_str();
  app.add_option("--address", address, "Listen address")->capture_default_str();
  app.add_option("--port", port, "Listen port (0 picks a free port)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  try {
    mentalgen::gateway::StubServer stub(mentalgen::gateway::parse_stub_mode(mode), port, address);
    std::cout << stub.url() << std::endl;
    int sig = 0;
    sigwait(&set, &sig);
  } catch (const std::exception& e) {
    std::cerr << "mentalgen-stub: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
