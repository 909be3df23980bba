#include "mentalgen/service/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/service/tcp_server.hpp"

namespace mentalgen::service {

using nlohmann::json;

namespace {

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Locates the line of the key path ["gateway", "mode"] by scanning for each
// quoted key after the previous one.
std::size_t line_of(std::string_view text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    const auto found = text.find("\"" + key + "\"", pos);
    if (found == std::string_view::npos) return 0;
    pos = found + key.size() + 2;
  }
  return path.empty() ? 0 : line_at(text, pos);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string dotted;
    for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
    throw ParseError(dotted + ": " + what, line_of(text_, path));
  }

  void only(const json& obj, const std::vector<std::string>& path, std::initializer_list<std::string_view> keys) const {
    if (!obj.is_object()) fail(path, "must be an object");
    for (const auto& [k, _] : obj.items()) {
      bool ok = false;
      for (auto a : keys) ok = ok || k == a;
      if (!ok) {
        auto p = path;
        p.push_back(k);
        fail(p, "unknown field");
      }
    }
  }

  template <class T>
  T get(const json& v, const std::vector<std::string>& path) const {
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      fail(path, "has the wrong type");
    }
  }

 private:
  std::string_view text_;
};

}  // namespace

ServiceConfig parse_service_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_at(text, e.byte ? e.byte - 1 : 0));
  }
  const Reader rd(text);
  rd.only(doc, {}, {"v", "listen", "artifacts_dir", "gateway", "training", "features", "session", "model"});
  ServiceConfig c;
  if (doc.contains("v") && rd.get<int>(doc["v"], {"v"}) != 1) rd.fail({"v"}, "unsupported version");
  if (doc.contains("listen")) {
    c.listen = rd.get<std::string>(doc["listen"], {"listen"});
    try {
      split_host_port(c.listen);
    } catch (const InvalidArgument& e) {
      rd.fail({"listen"}, e.what());
    }
  }
  if (doc.contains("artifacts_dir")) c.artifacts_dir = rd.get<std::string>(doc["artifacts_dir"], {"artifacts_dir"});
  if (doc.contains("gateway")) {
    const json& g = doc["gateway"];
    rd.only(g, {"gateway"}, {"mode", "url", "timeout_ms", "workflow", "connect_timeout_ms", "retry_delay_ms"});
    if (g.contains("mode")) {
      const auto m = rd.get<std::string>(g["mode"], {"gateway", "mode"});
      if (m == "mock") c.gateway_mode = GatewayMode::mock;
      else if (m == "remote") c.gateway_mode = GatewayMode::remote;
      else rd.fail({"gateway", "mode"}, "must be \"mock\" or \"remote\"");
    }
    try {
      c.remote = gateway::remote_config_from_json(g);
    } catch (const FieldError& e) {
      rd.fail({"gateway", e.field()}, e.what());
    } catch (const json::exception& e) {
      rd.fail({"gateway"}, e.what());
    }
  }
  if (doc.contains("training")) {
    const json& t = doc["training"];
    rd.only(t, {"training"}, {"C", "gamma", "folds", "seed"});
    if (t.contains("C")) {
      c.training.svm.C = rd.get<double>(t["C"], {"training", "C"});
      if (!(c.training.svm.C > 0)) rd.fail({"training", "C"}, "must be positive");
    }
    if (t.contains("gamma")) {
      if (t["gamma"].is_string()) {
        if (t["gamma"] != "scale") rd.fail({"training", "gamma"}, "must be \"scale\" or a positive number");
        c.training.svm.gamma_mode = intent::GammaMode::scale;
      } else {
        c.training.svm.gamma_mode = intent::GammaMode::fixed;
        c.training.svm.gamma = rd.get<double>(t["gamma"], {"training", "gamma"});
        if (!(c.training.svm.gamma > 0)) rd.fail({"training", "gamma"}, "must be \"scale\" or a positive number");
      }
    }
    if (t.contains("folds")) {
      c.training.folds = rd.get<std::size_t>(t["folds"], {"training", "folds"});
      if (c.training.folds < 2) rd.fail({"training", "folds"}, "must be at least 2");
    }
    if (t.contains("seed")) c.training.seed = rd.get<std::uint64_t>(t["seed"], {"training", "seed"});
  }
  if (doc.contains("features")) {
    const json& f = doc["features"];
    rd.only(f, {"features"}, {"apply_ica", "kind", "channel_relative"});
    if (f.contains("apply_ica")) c.features.apply_ica = rd.get<bool>(f["apply_ica"], {"features", "apply_ica"});
    if (f.contains("channel_relative"))
      c.features.channel_relative = rd.get<bool>(f["channel_relative"], {"features", "channel_relative"});
    if (f.contains("kind")) {
      try {
        c.features.kind = spectral::parse_feature_kind(rd.get<std::string>(f["kind"], {"features", "kind"}));
      } catch (const InvalidArgument& e) {
        rd.fail({"features", "kind"}, e.what());
      }
    }
  }
  if (doc.contains("session")) {
    const json& s = doc["session"];
    rd.only(s, {"session"}, {"min_rounds", "shuffle"});
    if (s.contains("min_rounds")) {
      c.session.min_rounds = rd.get<std::size_t>(s["min_rounds"], {"session", "min_rounds"});
      if (c.session.min_rounds == 0) rd.fail({"session", "min_rounds"}, "must be at least 1");
    }
    if (s.contains("shuffle")) c.session.shuffle = rd.get<bool>(s["shuffle"], {"session", "shuffle"});
  }
  if (doc.contains("model")) c.model_path = rd.get<std::string>(doc["model"], {"model"});
  return c;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("config file " + path.string() + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_service_config(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void apply_env_overrides(ServiceConfig& c, const gateway::EnvLookup& env) {
  if (const char* v = env("MENTALGEN_LISTEN")) c.listen = v;
  if (const char* v = env("MENTALGEN_ARTIFACTS_DIR")) c.artifacts_dir = v;
  if (const char* v = env("MENTALGEN_GATEWAY_MODE")) {
    const std::string m = v;
    if (m == "mock") c.gateway_mode = GatewayMode::mock;
    else if (m == "remote") c.gateway_mode = GatewayMode::remote;
    else throw FieldError("MENTALGEN_GATEWAY_MODE", "must be mock or remote");
  }
  if (const char* v = env("MENTALGEN_MODEL")) c.model_path = std::filesystem::path(v);
  if (const char* v = env("MENTALGEN_MIN_ROUNDS")) {
    try {
      c.session.min_rounds = std::stoul(v);
    } catch (const std::exception&) {
      throw FieldError("MENTALGEN_MIN_ROUNDS", "must be a positive integer");
    }
  }
  gateway::apply_env_overrides(c.remote, env);
}

void validate(const ServiceConfig& c) {
  split_host_port(c.listen);
  if (c.artifacts_dir.empty()) throw FieldError("artifacts_dir", "must not be empty");
  if (c.session.min_rounds == 0) throw FieldError("min_rounds", "must be at least 1");
  if (c.gateway_mode == GatewayMode::remote) gateway::parse_ws_url(c.remote.url);
  if (!(c.chunk_s > 0)) throw FieldError("chunk_s", "must be positive");
}

}  // namespace mentalgen::service
