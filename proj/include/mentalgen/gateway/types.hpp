#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::gateway {

/// Content-addressed artifact path relative to the artifacts directory,
/// e.g. "images/<sha256>.ppm".
struct ImageRef {
  std::string path;

  bool empty() const noexcept { return path.empty(); }
  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct Constraints {
  bool edge_guided = true;
  bool line_guided = true;
  friend bool operator==(const Constraints&, const Constraints&) = default;
};

struct GenerationRequest {
  std::string request_id;
  ImageRef base_image;
  Command command = Command::IncreaseTransparency;
  double model_weight = 0.0;  // [0, 1]
  std::vector<std::string> prompt_tokens;
  Constraints constraints;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const GenerationRequest&, const GenerationRequest&) = default;
};

enum class GenerationStatus { ok, failed, timeout };
enum class FailureKind { none, connect, malformed, server };

std::string_view to_string(GenerationStatus s) noexcept;
GenerationStatus parse_generation_status(std::string_view s);
std::string_view to_string(FailureKind k) noexcept;
FailureKind parse_failure_kind(std::string_view s);

struct GenerationResult {
  std::string request_id;
  ImageRef image;  // placeholder image unless status == ok
  GenerationStatus status = GenerationStatus::ok;
  FailureKind failure = FailureKind::none;
  double latency_ms = 0.0;
  unsigned attempts = 1;
  std::string message;

  friend bool operator==(const GenerationResult&, const GenerationResult&) = default;
};

}  // namespace mentalgen::gateway
