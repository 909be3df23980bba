#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mentalgen/gateway/remote_backend.hpp"
#include "mentalgen/intent/model.hpp"
#include "mentalgen/session/state.hpp"
#include "mentalgen/spectral/features.hpp"

namespace mentalgen::service {

enum class GatewayMode { mock, remote };

struct TrainingDefaults {
  intent::SvmParams svm;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
};

struct ServiceConfig {
  std::string listen = "127.0.0.1:8080";
  std::filesystem::path artifacts_dir = "artifacts";
  GatewayMode gateway_mode = GatewayMode::mock;
  gateway::RemoteConfig remote;
  TrainingDefaults training;
  spectral::FeatureConfig features;
  session::SessionConfig session;
  std::optional<std::filesystem::path> model_path;
  double chunk_s = 0.25;
};

// Config file (JSON, every field optional, unknown fields rejected):
//
//   {"v": 1,
//    "listen": "127.0.0.1:8080",
//    "artifacts_dir": "artifacts",
//    "gateway": {"mode": "mock" | "remote", "url": "ws://...", "timeout_ms": 120000,
//                "workflow": "...", "connect_timeout_ms": 5000, "retry_delay_ms": 200},
//    "training": {"C": 1.0, "gamma": "scale" | <number>, "folds": 10, "seed": 0},
//    "features": {"apply_ica": false, "kind": "log_band_power", "channel_relative": true},
//    "session": {"min_rounds": 8, "shuffle": false},
//    "model": "path/to/model.json"}
//
// Environment overrides, applied after the file: MENTALGEN_LISTEN,
// MENTALGEN_ARTIFACTS_DIR, MENTALGEN_GATEWAY_MODE, MENTALGEN_MODEL,
// MENTALGEN_MIN_ROUNDS, plus the gateway's MENTALGEN_GEN_* variables.

/// Parses config text. Errors are ParseError with the 1-based line of the
/// offending value.
ServiceConfig parse_service_config(std::string_view text);
ServiceConfig load_service_config(const std::filesystem::path& path);
void apply_env_overrides(ServiceConfig& cfg, const gateway::EnvLookup& env);
/// Checks cross-field constraints; throws InvalidArgument.
void validate(const ServiceConfig& cfg);

}  // namespace mentalgen::service
