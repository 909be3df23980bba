#include "mentalgen/gateway/backend.hpp"

#include <cmath>

namespace mentalgen::gateway {

void GenerationRequest::validate() const {
  if (request_id.empty()) throw FieldError("request_id", "must not be empty");
  if (!std::isfinite(model_weight) || model_weight < 0.0 || model_weight > 1.0)
    throw FieldError("model_weight", "must be in [0, 1]");
  if (prompt_tokens.empty()) throw FieldError("prompt_tokens", "must not be empty");
}

std::string_view to_string(GenerationStatus s) noexcept {
  switch (s) {
    case GenerationStatus::ok: return "ok";
    case GenerationStatus::failed: return "failed";
    case GenerationStatus::timeout: return "timeout";
  }
  return "?";
}

GenerationStatus parse_generation_status(std::string_view s) {
  if (s == "ok") return GenerationStatus::ok;
  if (s == "failed") return GenerationStatus::failed;
  if (s == "timeout") return GenerationStatus::timeout;
  throw InvalidArgument("unknown generation status '" + std::string(s) + "'");
}

std::string_view to_string(FailureKind k) noexcept {
  switch (k) {
    case FailureKind::none: return "none";
    case FailureKind::connect: return "connect";
    case FailureKind::malformed: return "malformed";
    case FailureKind::server: return "server";
  }
  return "?";
}

FailureKind parse_failure_kind(std::string_view s) {
  if (s == "none") return FailureKind::none;
  if (s == "connect") return FailureKind::connect;
  if (s == "malformed") return FailureKind::malformed;
  if (s == "server") return FailureKind::server;
  throw InvalidArgument("unknown failure kind '" + std::string(s) + "'");
}

ImageRef placeholder_image(const ArtifactStore& store) {
  const std::string rgb(64 * 64 * 3, static_cast<char>(128));
  return store.put_image(encode_ppm(64, 64, rgb, "mentalgen-placeholder v1"));
}

}  // namespace mentalgen::gateway
