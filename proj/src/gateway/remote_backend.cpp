#include "mentalgen/gateway/remote_backend.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <map>
#include <thread>

#include "mentalgen/core/hash.hpp"
#include "mentalgen/gateway/wire.hpp"

namespace mentalgen::gateway {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

RemoteConfig remote_config_from_json(const json& j) {
  RemoteConfig c;
  if (!j.is_object()) throw FieldError("gateway", "must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "url") c.url = v.get<std::string>();
    else if (k == "timeout_ms") c.timeout = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (k == "workflow") c.workflow = v.get<std::string>();
    else if (k == "connect_timeout_ms") c.connect_timeout = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (k == "retry_delay_ms") c.retry_delay = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (k != "mode") throw FieldError(k, "unknown field");
  }
  if (c.timeout.count() <= 0) throw FieldError("timeout_ms", "must be positive");
  parse_ws_url(c.url);
  return c;
}

json to_json(const RemoteConfig& c) {
  return {{"url", c.url},
          {"timeout_ms", c.timeout.count()},
          {"workflow", c.workflow},
          {"connect_timeout_ms", c.connect_timeout.count()},
          {"retry_delay_ms", c.retry_delay.count()}};
}

void apply_env_overrides(RemoteConfig& c, const EnvLookup& env) {
  if (const char* v = env("MENTALGEN_GEN_URL")) c.url = v;
  if (const char* v = env("MENTALGEN_GEN_TIMEOUT_MS")) {
    try {
      c.timeout = std::chrono::milliseconds(std::stoll(v));
    } catch (const std::exception&) {
      throw FieldError("MENTALGEN_GEN_TIMEOUT_MS", "must be an integer");
    }
    if (c.timeout.count() <= 0) throw FieldError("MENTALGEN_GEN_TIMEOUT_MS", "must be positive");
  }
  if (const char* v = env("MENTALGEN_GEN_TEMPLATE")) c.workflow = v;
}

WsUrl parse_ws_url(const std::string& url) {
  constexpr std::string_view scheme = "ws://";
  if (!url.starts_with(scheme)) throw FieldError("url", "must start with ws://");
  const std::string rest = url.substr(scheme.size());
  const auto slash = rest.find('/');
  const std::string authority = rest.substr(0, slash);
  WsUrl out;
  out.target = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos && authority.find(']') == std::string::npos) {
    out.host = authority.substr(0, colon);
    out.port = authority.substr(colon + 1);
  } else {
    out.host = authority;
    out.port = "80";
  }
  if (out.host.empty() || out.port.empty()) throw FieldError("url", "missing host or port");
  return out;
}

namespace {

using Socket = websocket::stream<beast::tcp_stream>;

// Runs the io_context until the pending operation completes or `deadline`
// passes; on expiry the socket is cancelled. Returns false on expiry.
bool run_until(net::io_context& ioc, Socket& ws, Clock::time_point deadline) {
  ioc.restart();
  ioc.run_until(deadline);
  if (ioc.stopped()) return true;
  beast::get_lowest_layer(ws).cancel();
  ioc.restart();
  ioc.run();
  return false;
}

beast::error_code connect_once(net::io_context& ioc, Socket& ws, const WsUrl& url, std::chrono::milliseconds limit) {
  beast::error_code ec;
  tcp::resolver resolver(ioc);
  const auto endpoints = resolver.resolve(url.host, url.port, ec);
  if (ec) return ec;
  auto& layer = beast::get_lowest_layer(ws);
  layer.expires_after(limit);
  bool done = false;
  layer.async_connect(endpoints, [&](beast::error_code e, const tcp::endpoint&) {
    ec = e;
    done = true;
  });
  ioc.restart();
  ioc.run();
  if (!done || ec) return ec ? ec : net::error::timed_out;
  layer.expires_after(limit);
  ws.async_handshake(url.host + ":" + url.port, url.target, [&](beast::error_code e) { ec = e; });
  ioc.restart();
  ioc.run();
  layer.expires_never();
  return ec;
}

}  // namespace

std::vector<GenerationResult> RemoteBackend::generate(std::span<const GenerationRequest> batch) {
  std::vector<GenerationResult> results(batch.size());
  std::map<std::string, std::size_t> pending;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    batch[i].validate();
    results[i].request_id = batch[i].request_id;
    if (!pending.emplace(batch[i].request_id, i).second)
      throw InvalidArgument("duplicate request id '" + batch[i].request_id + "' in batch");
  }
  if (batch.empty()) return results;

  const WsUrl url = parse_ws_url(cfg_.url);
  net::io_context ioc;
  auto ws = std::make_unique<Socket>(ioc);
  beast::error_code ec;
  unsigned attempts = 0;
  for (; attempts < 2; ++attempts) {
    if (attempts > 0) {
      std::this_thread::sleep_for(cfg_.retry_delay);
      ws = std::make_unique<Socket>(ioc);
    }
    ec = connect_once(ioc, *ws, url, cfg_.connect_timeout);
    if (!ec) break;
  }
  auto finish = [&](std::size_t i, GenerationStatus st, FailureKind kind, std::string msg) {
    results[i].status = st;
    results[i].failure = kind;
    results[i].message = std::move(msg);
    results[i].attempts = std::max(attempts, 1u);
  };
  if (ec) {
    const ImageRef ph = placeholder_image(store_);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      finish(i, GenerationStatus::failed, FailureKind::connect, "connect failed: " + ec.message());
      results[i].attempts = attempts;
      results[i].image = ph;
    }
    return results;
  }
  attempts += 1;

  const auto t0 = Clock::now();
  const auto deadline = t0 + cfg_.timeout;
  ws->text(true);
  for (const auto& req : batch) {
    ws->write(net::buffer(encode(request_message(req, cfg_.workflow))), ec);
    if (ec) break;
  }

  std::string failure_note;
  FailureKind bulk_kind = FailureKind::server;
  GenerationStatus bulk_status = GenerationStatus::failed;
  while (!ec && !pending.empty()) {
    beast::flat_buffer buf;
    bool done = false;
    ws->async_read(buf, [&](beast::error_code e, std::size_t) {
      ec = e;
      done = true;
    });
    if (!run_until(ioc, *ws, deadline) || !done) {
      bulk_status = GenerationStatus::timeout;
      bulk_kind = FailureKind::none;
      failure_note = "no result within " + std::to_string(cfg_.timeout.count()) + " ms";
      break;
    }
    if (ec) {
      failure_note = "connection lost: " + ec.message();
      break;
    }
    WireMessage msg;
    try {
      msg = decode(beast::buffers_to_string(buf.data()));
    } catch (const ParseError& e) {
      bulk_kind = FailureKind::malformed;
      failure_note = e.what();
      break;
    }
    auto it = pending.find(msg.request_id);
    if (it == pending.end()) continue;
    const std::size_t i = it->second;
    if (msg.type == MessageType::progress) continue;
    if (msg.type == MessageType::error) {
      finish(i, GenerationStatus::failed, FailureKind::server, msg.payload.value("message", "server error"));
      results[i].image = placeholder_image(store_);
    } else if (msg.type == MessageType::result) {
      try {
        const std::string bytes = base64_decode(msg.payload.at("image_b64").get<std::string>());
        if (bytes.empty()) throw ParseError("empty image", 0);
        results[i].image = store_.put_image(bytes);
        finish(i, GenerationStatus::ok, FailureKind::none, {});
      } catch (const std::exception& e) {
        finish(i, GenerationStatus::failed, FailureKind::malformed, std::string("bad result payload: ") + e.what());
        results[i].image = placeholder_image(store_);
      }
    } else {
      finish(i, GenerationStatus::failed, FailureKind::malformed, "unexpected message type");
      results[i].image = placeholder_image(store_);
    }
    results[i].latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    pending.erase(it);
  }
  if (!pending.empty()) {
    if (failure_note.empty()) failure_note = ec ? ec.message() : "incomplete batch";
    const ImageRef ph = placeholder_image(store_);
    for (const auto& [_, i] : pending) {
      finish(i, bulk_status, bulk_kind, failure_note);
      results[i].image = ph;
      results[i].latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
  }
  // Best-effort close, bounded to one second.
  ws->async_close(websocket::close_code::normal, [](beast::error_code) {});
  run_until(ioc, *ws, Clock::now() + std::chrono::seconds(1));
  return results;
}

GenerationResult remote_generate(const GenerationRequest& req, const RemoteConfig& cfg, const ArtifactStore& store) {
  RemoteBackend b(store, cfg);
  return b.generate(std::span<const GenerationRequest>(&req, 1)).front();
}

}  // namespace mentalgen::gateway
