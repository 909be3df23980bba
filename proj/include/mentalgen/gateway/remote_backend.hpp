#pragma once

#include <chrono>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "mentalgen/gateway/backend.hpp"

namespace mentalgen::gateway {

/// Endpoint settings. Environment overrides: MENTALGEN_GEN_URL,
/// MENTALGEN_GEN_TIMEOUT_MS, MENTALGEN_GEN_TEMPLATE.
struct RemoteConfig {
  std::string url = "ws://127.0.0.1:8188/mentalgen";
  std::chrono::milliseconds timeout{120000};
  std::string workflow = "interior-img2img-v1";
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds retry_delay{200};
};

/// {"url", "timeout_ms", "workflow", "connect_timeout_ms", "retry_delay_ms"};
/// missing fields keep their defaults, unknown fields are rejected.
RemoteConfig remote_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RemoteConfig& c);

using EnvLookup = std::function<const char*(const char*)>;
void apply_env_overrides(RemoteConfig& c, const EnvLookup& env);

struct WsUrl {
  std::string host;
  std::string port;
  std::string target;
};
/// ws://host[:port][/path]; the port defaults to 80.
WsUrl parse_ws_url(const std::string& url);

/// WebSocket client. One connection per batch: every request is sent up
/// front, then results are collected until all arrived or `timeout` passed.
///
///   connect failure   -> one retry after retry_delay, then failed/connect
///   no reply in time  -> timeout, no retry
///   unparseable reply -> failed/malformed
///   error message     -> failed/server
///
/// Failed and timed-out results carry the placeholder image.
class RemoteBackend final : public Backend {
 public:
  RemoteBackend(ArtifactStore store, RemoteConfig cfg) : store_(std::move(store)), cfg_(std::move(cfg)) {}
  std::string_view name() const noexcept override { return "remote"; }
  std::vector<GenerationResult> generate(std::span<const GenerationRequest> batch) override;
  const RemoteConfig& config() const noexcept { return cfg_; }

 private:
  ArtifactStore store_;
  RemoteConfig cfg_;
};

GenerationResult remote_generate(const GenerationRequest& req, const RemoteConfig& cfg, const ArtifactStore& store);

}  // namespace mentalgen::gateway
