#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/gateway/backend.hpp"
#include "mentalgen/session/log.hpp"
#include "mentalgen/session/report.hpp"

namespace mentalgen::session {

/// Session ids: 1..64 characters from [A-Za-z0-9_-].
bool valid_session_id(std::string_view id) noexcept;

/// Owns the live sessions. Each session's mutations are serialized by its own
/// mutex and every event is durably appended to
/// <artifacts>/sessions/<id>.jsonl before the call returns. Distinct sessions
/// proceed concurrently.
class SessionEngine {
 public:
  /// Called after each appended event with the log line's JSON, under the
  /// session's lock, so per-session order is preserved.
  using Listener = std::function<void(const std::string& session_id, const nlohmann::json& event)>;

  SessionEngine(gateway::ArtifactStore store, std::shared_ptr<gateway::Backend> backend,
                PromptCorpus corpus = default_corpus(), ComposeOptions compose = {});

  const gateway::ArtifactStore& store() const noexcept { return store_; }
  std::filesystem::path log_path(const std::string& session_id) const;

  /// Loads every session log, then completes rounds whose generation was cut
  /// off. Returns the number of sessions loaded.
  std::size_t recover();

  /// Empty `session_id` picks a random one. Throws StateError for a duplicate
  /// id and FieldError("base_image") when the image does not resolve.
  DesignSession create(const std::string& participant_id, const gateway::ImageRef& base, const SessionConfig& cfg,
                       std::string session_id = {});

  /// Logs round_started, generates the 5 candidates, logs candidates_ready.
  Round start_round(const std::string& session_id, const intent::Prediction& pred, std::uint64_t seed);

  DesignSession submit(const std::string& session_id, const std::optional<Ratings>& ratings,
                       std::optional<std::size_t> final_mark);

  DesignSession get(const std::string& session_id) const;
  SatisfactionTrace report(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;

  void set_listener(Listener l);

 private:
  struct Entry {
    mutable std::mutex mutex;
    DesignSession state;
    std::optional<SessionLog> log;
  };

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  void commit(Entry& e, const Event& ev);
  void generate_round(Entry& e);

  gateway::ArtifactStore store_;
  std::shared_ptr<gateway::Backend> backend_;
  PromptCorpus corpus_;
  ComposeOptions compose_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex listener_mutex_;
  std::shared_ptr<const Listener> listener_;
};

}  // namespace mentalgen::session
