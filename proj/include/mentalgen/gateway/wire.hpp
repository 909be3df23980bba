#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mentalgen/gateway/types.hpp"

namespace mentalgen::gateway {

inline constexpr int kWireVersion = 1;

// Gateway wire schema. Every message is one JSON text frame:
//
//   {"v": 1, "type": "request" | "progress" | "result" | "error",
//    "request_id": "<id>", "payload": {...}}
//
// request  payload: {"workflow": "<template id>", "request": <GenerationRequest>}
// progress payload: {"fraction": 0..1}
// result   payload: {"image_b64": "<base64 image bytes>"}
// error    payload: {"message": "<text>"}
//
// GenerationRequest:
//   {"request_id", "base_image", "command", "model_weight", "prompt_tokens",
//    "constraints": {"edge_guided", "line_guided"}, "seed"}
// GenerationResult:
//   {"request_id", "image", "status", "failure", "latency_ms", "attempts",
//    "message"}
//
// Unknown fields are rejected.

enum class MessageType { request, progress, result, error };
std::string_view to_string(MessageType t) noexcept;

struct WireMessage {
  MessageType type = MessageType::request;
  std::string request_id;
  nlohmann::json payload = nlohmann::json::object();
};

nlohmann::json to_json(const GenerationRequest& r);
GenerationRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GenerationResult& r);
GenerationResult result_from_json(const nlohmann::json& j);

std::string encode(const WireMessage& m);
/// Throws ParseError on malformed text, wrong version or unknown fields.
WireMessage decode(std::string_view text);

/// Shortcut for a request message.
WireMessage request_message(const GenerationRequest& r, const std::string& workflow);

}  // namespace mentalgen::gateway
