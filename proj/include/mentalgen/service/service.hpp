#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/intent/pipeline.hpp"
#include "mentalgen/service/config.hpp"
#include "mentalgen/session/runner.hpp"

namespace mentalgen::service {

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// WebSocket close codes used by the stream endpoint.
inline constexpr std::uint16_t kCloseMalformed = 4000;
inline constexpr std::uint16_t kCloseChannelMismatch = 4001;
inline constexpr std::uint16_t kCloseState = 4002;
inline constexpr std::uint16_t kCloseInternal = 1011;

struct StreamOutcome {
  std::vector<std::string> replies;  // text frames to send back
  std::optional<std::pair<std::uint16_t, std::string>> close;
};

class Service;

/// Per-connection EEG intake for one session. Accumulates chunk messages
/// until one analysis window is complete, then predicts and starts a round.
///
/// Client messages:
///   {"type": "chunk", "sample_rate": 256, "data": [[ch0...], [ch1...], ...], "seed": <optional>}
///   {"type": "end"}
/// Server messages:
///   {"type": "accepted", "buffered": <samples>, "needed": <samples>}
///   {"type": "candidates_ready", "session_id", "round": <round JSON>}
class StreamIntake {
 public:
  StreamIntake(Service& svc, std::string session_id) : svc_(svc), session_id_(std::move(session_id)) {}
  StreamOutcome on_message(std::string_view text);

 private:
  Service& svc_;
  std::string session_id_;
  double sample_rate_ = 0.0;
  std::size_t channels_ = 0;
  std::vector<std::vector<double>> buffer_;
};

enum class JobState { queued, running, succeeded, failed, cancelled };
std::string_view to_string(JobState s) noexcept;

/// The HTTP/WebSocket application, independent of the transport.
///
/// HTTP routes (JSON bodies, unknown fields rejected):
///   GET    /healthz
///   GET    /v1/sessions
///   POST   /v1/sessions                      -> 201
///   GET    /v1/sessions/{id}
///   POST   /v1/sessions/{id}/rounds          -> 201
///   POST   /v1/sessions/{id}/ratings
///   GET    /v1/sessions/{id}/report
///   POST   /v1/models/train                  -> 202
///   GET    /v1/models/train/{job}
///   DELETE /v1/models/train/{job}
///   GET    /v1/models/current
///   GET    /v1/artifacts/images/{file}
/// WebSocket routes:
///   /v1/sessions/{id}/stream   EEG chunk intake (StreamIntake)
///   /v1/sessions/{id}/events   every logged event of the session
class Service {
 public:
  /// Builds the backend from the config unless one is given, loads the
  /// configured model, and replays all session logs.
  explicit Service(ServiceConfig cfg, std::shared_ptr<gateway::Backend> backend = nullptr);
  ~Service();

  Reply handle(std::string_view method, std::string_view target, std::string_view body);

  /// Throws NotFoundError for an unknown session.
  std::unique_ptr<StreamIntake> open_stream(const std::string& session_id);

  using Subscriber = std::function<void(const std::string& text)>;
  /// Throws NotFoundError for an unknown session.
  std::uint64_t subscribe(const std::string& session_id, Subscriber s);
  void unsubscribe(std::uint64_t token);

  const ServiceConfig& config() const noexcept { return cfg_; }
  session::SessionEngine& engine() noexcept { return *engine_; }
  std::shared_ptr<const intent::IntentPipeline> model() const;
  void set_model(std::shared_ptr<const intent::IntentPipeline> m);
  std::size_t recovered_sessions() const noexcept { return recovered_; }

  /// Predicts `window`, starts a round and returns the round JSON.
  nlohmann::json run_round(const std::string& session_id, const EegRecording& window,
                           std::optional<std::uint64_t> seed);

 private:
  struct Job {
    std::string id;
    std::string dataset;
    mutable std::mutex mutex;
    JobState state = JobState::queued;
    intent::TrainProgress progress;
    std::optional<intent::CvReport> cv;
    std::string model_path;
    std::string error;
    std::jthread thread;
  };

  Reply route(std::string_view method, const std::vector<std::string>& parts, std::string_view body);
  Reply create_session(const nlohmann::json& body);
  Reply post_round(const std::string& id, const nlohmann::json& body);
  Reply post_ratings(const std::string& id, const nlohmann::json& body);
  Reply start_training(const nlohmann::json& body);
  nlohmann::json job_json(const Job& j) const;
  void publish(const std::string& session_id, const nlohmann::json& event);

  ServiceConfig cfg_;
  std::unique_ptr<session::SessionEngine> engine_;
  std::size_t recovered_ = 0;

  mutable std::mutex model_mutex_;
  std::shared_ptr<const intent::IntentPipeline> model_;

  std::mutex subs_mutex_;
  std::uint64_t next_token_ = 1;
  std::map<std::uint64_t, std::pair<std::string, Subscriber>> subscribers_;

  std::mutex jobs_mutex_;
  std::size_t next_job_ = 1;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
};

/// Maps a library exception to an HTTP status and error document:
///   {"error": {"code": "...", "message": "...", "field": "..."?}}
Reply error_reply(const std::exception& e);

}  // namespace mentalgen::service
