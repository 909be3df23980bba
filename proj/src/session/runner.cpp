#include "mentalgen/session/runner.hpp"

#include <random>

namespace mentalgen::session {

namespace fs = std::filesystem;

bool valid_session_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

SessionEngine::SessionEngine(gateway::ArtifactStore store, std::shared_ptr<gateway::Backend> backend,
                             PromptCorpus corpus, ComposeOptions compose)
    : store_(std::move(store)), backend_(std::move(backend)), corpus_(std::move(corpus)), compose_(std::move(compose)) {
  if (!backend_) throw InvalidArgument("session engine needs a backend");
  corpus_.validate();
  fs::create_directories(store_.root() / "sessions");
}

fs::path SessionEngine::log_path(const std::string& id) const { return store_.root() / "sessions" / (id + ".jsonl"); }

std::size_t SessionEngine::recover() {
  std::vector<fs::path> logs;
  for (const auto& f : fs::directory_iterator(store_.root() / "sessions"))
    if (f.path().extension() == ".jsonl") logs.push_back(f.path());
  std::sort(logs.begin(), logs.end());
  std::size_t loaded = 0;
  for (const auto& p : logs) {
    const auto contents = read_log(p);
    if (contents.events.empty()) continue;
    auto entry = std::make_shared<Entry>();
    entry->state = replay(contents.events);
    if (entry->state.session_id != p.stem().string())
      throw ParseError(p.string() + ": session id does not match the file name", 0);
    entry->log.emplace(p);
    {
      std::unique_lock lock(sessions_mutex_);
      sessions_[entry->state.session_id] = entry;
    }
    ++loaded;
    std::lock_guard lock(entry->mutex);
    const auto& s = entry->state;
    if (s.status == SessionStatus::active && !s.history.empty() && !s.history.back().has_candidates())
      generate_round(*entry);
  }
  return loaded;
}

std::shared_ptr<SessionEngine::Entry> SessionEngine::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("session '" + id + "' not found");
  return it->second;
}

void SessionEngine::commit(Entry& e, const Event& ev) {
  // Validate against a copy first so a rejected event is never logged.
  DesignSession next = e.state;
  apply(next, ev);
  const std::string id = next.session_id;
  const std::string line = e.log->append(ev, id);
  e.state = std::move(next);
  std::shared_ptr<const Listener> l;
  {
    std::lock_guard lock(listener_mutex_);
    l = listener_;
  }
  if (l && *l) (*l)(id, nlohmann::json::parse(line));
}

DesignSession SessionEngine::create(const std::string& participant_id, const gateway::ImageRef& base,
                                    const SessionConfig& cfg, std::string session_id) {
  if (session_id.empty()) {
    std::random_device rd;
    char buf[20];
    std::snprintf(buf, sizeof buf, "s-%08x%08x", rd(), rd());
    session_id = buf;
  }
  if (!valid_session_id(session_id)) throw FieldError("session_id", "must be 1..64 characters of [A-Za-z0-9_-]");
  if (!store_.resolvable(base)) throw FieldError("base_image", "image '" + base.path + "' does not resolve");
  if (cfg.min_rounds == 0) throw FieldError("min_rounds", "must be at least 1");

  auto entry = std::make_shared<Entry>();
  {
    std::unique_lock lock(sessions_mutex_);
    if (sessions_.count(session_id) || fs::exists(log_path(session_id)))
      throw StateError("session '" + session_id + "' already exists");
    sessions_[session_id] = entry;
  }
  std::lock_guard lock(entry->mutex);
  try {
    entry->log.emplace(log_path(session_id));
    commit(*entry, SessionStarted{session_id, participant_id, base, cfg});
  } catch (...) {
    std::unique_lock map_lock(sessions_mutex_);
    sessions_.erase(session_id);
    throw;
  }
  return entry->state;
}

void SessionEngine::generate_round(Entry& e) {
  const Round& r = e.state.history.back();
  ComposeOptions opts = compose_;
  opts.request_prefix = e.state.session_id + "-" + std::to_string(r.index) + "-";
  const auto requests = compose_requests(r.prediction, r.base_image, corpus_, r.seed, opts);
  auto results = backend_->generate(requests);
  for (auto& res : results)
    if (res.status != gateway::GenerationStatus::ok || !store_.resolvable(res.image)) {
      res.status = res.status == gateway::GenerationStatus::ok ? gateway::GenerationStatus::failed : res.status;
      res.image = gateway::placeholder_image(store_);
    }
  commit(e, CandidatesReady{r.index, make_candidates(requests, results, e.state.config.shuffle, r.seed)});
}

Round SessionEngine::start_round(const std::string& id, const intent::Prediction& pred, std::uint64_t seed) {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  const auto& s = e->state;
  if (s.status == SessionStatus::finalized) throw StateError("session " + id + " is finalized");
  if (s.round_open()) throw StateError("round " + std::to_string(s.round_index()) + " is still waiting for ratings");
  commit(*e, RoundStarted{s.round_index() + 1, s.base_image, pred, seed});
  generate_round(*e);
  return e->state.history.back();
}

DesignSession SessionEngine::submit(const std::string& id, const std::optional<Ratings>& ratings,
                                    std::optional<std::size_t> final_mark) {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  for (const auto& ev : submission_events(e->state, ratings, final_mark)) commit(*e, ev);
  return e->state;
}

DesignSession SessionEngine::get(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  return e->state;
}

SatisfactionTrace SessionEngine::report(const std::string& id) const { return session_report(get(id)); }

std::vector<std::string> SessionEngine::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

void SessionEngine::set_listener(Listener l) {
  std::lock_guard lock(listener_mutex_);
  listener_ = std::make_shared<const Listener>(std::move(l));
}

}  // namespace mentalgen::session
