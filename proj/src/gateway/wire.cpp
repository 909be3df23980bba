#include "mentalgen/gateway/wire.hpp"

#include <initializer_list>

namespace mentalgen::gateway {

using nlohmann::json;

namespace {

void require_fields(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be an object", 0);
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(std::string(what) + ": unknown field '" + key + "'", 0);
  }
}

template <class F>
auto parsing(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what(), 0);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string(what) + ": " + e.what(), 0);
  }
}

}  // namespace

std::string_view to_string(MessageType t) noexcept {
  switch (t) {
    case MessageType::request: return "request";
    case MessageType::progress: return "progress";
    case MessageType::result: return "result";
    case MessageType::error: return "error";
  }
  return "?";
}

json to_json(const GenerationRequest& r) {
  return {{"request_id", r.request_id},
          {"base_image", r.base_image.path},
          {"command", to_string(r.command)},
          {"model_weight", r.model_weight},
          {"prompt_tokens", r.prompt_tokens},
          {"constraints", {{"edge_guided", r.constraints.edge_guided}, {"line_guided", r.constraints.line_guided}}},
          {"seed", r.seed}};
}

GenerationRequest request_from_json(const json& j) {
  return parsing("generation request", [&] {
    require_fields(j, {"request_id", "base_image", "command", "model_weight", "prompt_tokens", "constraints", "seed"},
                   "generation request");
    GenerationRequest r;
    r.request_id = j.at("request_id").get<std::string>();
    r.base_image.path = j.at("base_image").get<std::string>();
    r.command = parse_command(j.at("command").get<std::string>());
    r.model_weight = j.at("model_weight").get<double>();
    r.prompt_tokens = j.at("prompt_tokens").get<std::vector<std::string>>();
    const json& c = j.at("constraints");
    require_fields(c, {"edge_guided", "line_guided"}, "constraints");
    r.constraints.edge_guided = c.at("edge_guided").get<bool>();
    r.constraints.line_guided = c.at("line_guided").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  });
}

json to_json(const GenerationResult& r) {
  return {{"request_id", r.request_id},       {"image", r.image.path},   {"status", to_string(r.status)},
          {"failure", to_string(r.failure)},  {"latency_ms", r.latency_ms}, {"attempts", r.attempts},
          {"message", r.message}};
}

GenerationResult result_from_json(const json& j) {
  return parsing("generation result", [&] {
    require_fields(j, {"request_id", "image", "status", "failure", "latency_ms", "attempts", "message"},
                   "generation result");
    GenerationResult r;
    r.request_id = j.at("request_id").get<std::string>();
    r.image.path = j.at("image").get<std::string>();
    r.status = parse_generation_status(j.at("status").get<std::string>());
    r.failure = parse_failure_kind(j.value("failure", "none"));
    r.latency_ms = j.at("latency_ms").get<double>();
    r.attempts = j.value("attempts", 1u);
    r.message = j.value("message", "");
    return r;
  });
}

std::string encode(const WireMessage& m) {
  return json{{"v", kWireVersion}, {"type", to_string(m.type)}, {"request_id", m.request_id}, {"payload", m.payload}}
      .dump();
}

WireMessage decode(std::string_view text) {
  return parsing("wire message", [&] {
    const json j = json::parse(text);
    require_fields(j, {"v", "type", "request_id", "payload"}, "wire message");
    if (j.at("v").get<int>() != kWireVersion) throw ParseError("wire message: unsupported version", 0);
    WireMessage m;
    const auto type = j.at("type").get<std::string>();
    if (type == "request") m.type = MessageType::request;
    else if (type == "progress") m.type = MessageType::progress;
    else if (type == "result") m.type = MessageType::result;
    else if (type == "error") m.type = MessageType::error;
    else throw ParseError("wire message: unknown type '" + type + "'", 0);
    m.request_id = j.at("request_id").get<std::string>();
    m.payload = j.value("payload", json::object());
    if (!m.payload.is_object()) throw ParseError("wire message: payload must be an object", 0);
    return m;
  });
}

WireMessage request_message(const GenerationRequest& r, const std::string& workflow) {
  return {MessageType::request, r.request_id, {{"workflow", workflow}, {"request", to_json(r)}}};
}

}  // namespace mentalgen::gateway
