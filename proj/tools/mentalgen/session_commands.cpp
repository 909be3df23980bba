#include <csignal>
#include <iostream>
#include <memory>

#include "cli.hpp"
#include "mentalgen/core/random.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/intent/persistence.hpp"
#include "mentalgen/service/http_server.hpp"
#include "mentalgen/session/events.hpp"
#include "mentalgen/session/simulate.hpp"

namespace mentalgen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SimulateArgs {
  std::size_t rounds = 8;
  std::string policy = "prefer-predicted";
  fs::path model;
  fs::path artifacts = "artifacts";
  std::string session_id;
  std::size_t min_rounds = 8;
  double noise = 1.0;
  bool shuffle = false;
  fs::path out;
};

intent::IntentPipeline quick_pipeline(std::uint64_t seed) {
  auto spec = ingest::command_synth_spec(20, 1.0, derive_seed(seed, 0x7a1));
  intent::TrainOptions opts;
  opts.seed = seed;
  opts.folds = 5;
  return intent::train_pipeline(ingest::synth_generate(spec), {}, opts);
}

void run_simulate(const SimulateArgs& a, const Globals& g) {
  const auto pipe = a.model.empty() ? quick_pipeline(g.seed) : intent::load_pipeline(a.model);
  gateway::ArtifactStore store(a.artifacts);
  session::SessionEngine engine(store, std::make_shared<gateway::MockBackend>(store));
  auto policy = session::parse_rating_policy(a.policy, derive_seed(g.seed, 0x9a7));
  session::SimulationConfig cfg;
  cfg.rounds = a.rounds;
  cfg.seed = g.seed;
  cfg.session_id = a.session_id.empty() ? "sim-" + std::to_string(g.seed) : a.session_id;
  cfg.session.min_rounds = a.min_rounds;
  cfg.session.shuffle = a.shuffle;
  cfg.window_noise_sigma = a.noise;
  const auto res = session::simulate(engine, pipe, *policy, cfg);
  json intended = json::array();
  for (Command c : res.intended) intended.push_back(to_string(c));
  json doc = {{"report", session::to_json(res.trace)},
              {"log", engine.log_path(res.session.session_id).string()},
              {"policy", policy->name()},
              {"intended", intended},
              {"provenance", provenance(g, "simulate")}};
  if (!a.out.empty()) write_json(a.out, doc);
  std::cout << doc.dump(1) << std::endl;
}

struct ServeArgs {
  fs::path config;
  std::string listen;
  fs::path artifacts;
  std::string gateway;
  fs::path model;
};

void run_serve(const ServeArgs& a, const Globals&) {
  service::ServiceConfig cfg = a.config.empty() ? service::ServiceConfig{} : service::load_service_config(a.config);
  service::apply_env_overrides(cfg, [](const char* n) { return std::getenv(n); });
  if (!a.listen.empty()) cfg.listen = a.listen;
  if (!a.artifacts.empty()) cfg.artifacts_dir = a.artifacts;
  if (!a.gateway.empty()) cfg.gateway_mode = a.gateway == "remote" ? service::GatewayMode::remote : service::GatewayMode::mock;
  if (!a.model.empty()) cfg.model_path = a.model;

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  service::Service svc(cfg);
  service::HttpServer http(svc, cfg.listen);
  std::cout << json{{"listening", "http://" + http.address() + ":" + std::to_string(http.port())},
                    {"port", http.port()},
                    {"recovered_sessions", svc.recovered_sessions()},
                    {"model_loaded", svc.model() != nullptr}}
                   .dump()
            << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  http.stop();
}

}  // namespace

void register_session_commands(CLI::App& app, Globals& g) {
  auto sim = std::make_shared<SimulateArgs>();
  auto* s = app.add_subcommand("simulate", "Run a scripted design session against the mock generator");
  s->add_option("--rounds", sim->rounds, "Rounds to run")->capture_default_str();
  s->add_option("--rating-policy", sim->policy, "prefer-predicted | random | script:FILE")->capture_default_str();
  s->add_option("--model", sim->model, "Model file (default: train a quick synthetic model)");
  s->add_option("--artifacts", sim->artifacts, "Artifacts directory")->capture_default_str();
  s->add_option("--session-id", sim->session_id, "Session id (default: sim-<seed>)");
  s->add_option("--min-rounds", sim->min_rounds, "Minimum rounds before a final mark")->capture_default_str();
  s->add_option("--noise", sim->noise, "Noise sigma of the synthetic EEG windows")->capture_default_str();
  s->add_flag("--shuffle", sim->shuffle, "Shuffle candidate order on screen");
  s->add_option("--out", sim->out, "Also write the result document here");
  s->callback([sim, &g] { run_simulate(*sim, g); });

  auto sv = std::make_shared<ServeArgs>();
  auto* v = app.add_subcommand("serve", "Run the HTTP/WebSocket service until SIGINT or SIGTERM");
  v->add_option("--config", sv->config, "Service config JSON");
  v->add_option("--listen", sv->listen, "host:port (port 0 picks a free port)");
  v->add_option("--artifacts", sv->artifacts, "Artifacts directory");
  v->add_option("--gateway", sv->gateway, "mock | remote")->check(CLI::IsMember({"mock", "remote"}));
  v->add_option("--model", sv->model, "Model file to load at startup");
  v->callback([sv, &g] { run_serve(*sv, g); });
}

}  // namespace mentalgen::cli
