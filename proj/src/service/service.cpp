#include "mentalgen/service/service.hpp"

#include <sys/resource.h>
#include <sys/syscall.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>

#include "mentalgen/core/hash.hpp"
#include "mentalgen/core/random.hpp"
#include "mentalgen/gateway/remote_backend.hpp"
#include "mentalgen/ingest/csv.hpp"
#include "mentalgen/intent/persistence.hpp"
#include "mentalgen/session/events.hpp"
#include "mentalgen/spectral/bands.hpp"

namespace mentalgen::service {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(JobState s) noexcept {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::succeeded: return "succeeded";
    case JobState::failed: return "failed";
    case JobState::cancelled: return "cancelled";
  }
  return "?";
}

namespace {

Reply json_reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

Reply error_doc(int status, std::string_view code, const std::string& message, const std::string& field = {}) {
  json e = {{"code", code}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return json_reply(status, {{"error", e}});
}

json parse_body(std::string_view body, std::initializer_list<std::string_view> allowed) {
  json j;
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    j = json::object();
  } else {
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("request body is not valid JSON: ") + e.what(), 0);
    }
  }
  if (!j.is_object()) throw ParseError("request body must be a JSON object", 0);
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw FieldError(k, "unknown field");
  }
  return j;
}

template <class T>
T field(const json& j, const std::string& name) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw FieldError(name, j.contains(name) ? "has the wrong type" : "is required");
  }
}

std::vector<std::string> split_path(std::string_view target) {
  const auto q = target.find('?');
  if (q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= target.size()) {
    const auto slash = target.find('/', pos);
    const auto end = slash == std::string_view::npos ? target.size() : slash;
    if (end > pos) parts.emplace_back(target.substr(pos, end - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return parts;
}

EegRecording window_from_json(const json& w) {
  for (const auto& [k, _] : w.items())
    if (k != "sample_rate" && k != "channel_names" && k != "data") throw FieldError("window." + k, "unknown field");
  EegRecording rec;
  rec.sample_rate = field<double>(w, "sample_rate");
  if (!(rec.sample_rate > 0)) throw FieldError("window.sample_rate", "must be positive");
  std::vector<std::vector<double>> rows;
  try {
    rows = w.at("data").get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    throw FieldError("window.data", "must be an array of per-channel sample arrays");
  }
  if (rows.empty() || rows.front().empty()) throw FieldError("window.data", "must not be empty");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw FieldError("window.data", "channels have different lengths");
  rec.data = Matrix::from_rows(rows);
  rec.channel_names = w.contains("channel_names") ? field<std::vector<std::string>>(w, "channel_names")
                                                  : default_channel_names(rec.channels());
  rec.validate();
  return rec;
}

EegRecording slice(const EegRecording& rec, double offset_s, double duration_s) {
  const auto start = static_cast<std::size_t>(std::llround(offset_s * rec.sample_rate));
  const auto len = static_cast<std::size_t>(std::llround(duration_s * rec.sample_rate));
  if (offset_s < 0 || start + len > rec.samples())
    throw FieldError("replay", "requested span exceeds the recording");
  EegRecording out;
  out.sample_rate = rec.sample_rate;
  out.channel_names = rec.channel_names;
  out.data = Matrix(rec.channels(), len);
  for (std::size_t ch = 0; ch < rec.channels(); ++ch)
    for (std::size_t i = 0; i < len; ++i) out.data(ch, i) = rec.data(ch, start + i);
  return out;
}

std::optional<std::uint64_t> optional_seed(const json& j) {
  if (!j.contains("seed") || j["seed"].is_null()) return std::nullopt;
  if (!j["seed"].is_number_unsigned()) throw FieldError("seed", "must be a non-negative integer");
  return j["seed"].get<std::uint64_t>();
}

void lower_thread_priority() { ::setpriority(PRIO_PROCESS, static_cast<id_t>(::syscall(SYS_gettid)), 10); }

}  // namespace

Reply error_reply(const std::exception& e) {
  if (const auto* f = dynamic_cast<const FieldError*>(&e)) return error_doc(400, "invalid_field", f->what(), f->field());
  if (dynamic_cast<const ParseError*>(&e)) return error_doc(400, "malformed", e.what());
  if (dynamic_cast<const InvalidArgument*>(&e)) return error_doc(400, "invalid_argument", e.what());
  if (dynamic_cast<const NotFoundError*>(&e)) return error_doc(404, "not_found", e.what());
  if (dynamic_cast<const StateError*>(&e)) return error_doc(409, "conflict", e.what());
  return error_doc(500, "internal", e.what());
}

Service::Service(ServiceConfig cfg, std::shared_ptr<gateway::Backend> backend) : cfg_(std::move(cfg)) {
  validate(cfg_);
  gateway::ArtifactStore store(cfg_.artifacts_dir);
  fs::create_directories(cfg_.artifacts_dir / "models");
  if (!backend) {
    if (cfg_.gateway_mode == GatewayMode::mock) backend = std::make_shared<gateway::MockBackend>(store);
    else backend = std::make_shared<gateway::RemoteBackend>(store, cfg_.remote);
  }
  engine_ = std::make_unique<session::SessionEngine>(store, std::move(backend));
  engine_->set_listener([this](const std::string& id, const json& ev) { publish(id, ev); });
  if (cfg_.model_path) model_ = std::make_shared<const intent::IntentPipeline>(intent::load_pipeline(*cfg_.model_path));
  recovered_ = engine_->recover();
}

Service::~Service() {
  std::map<std::string, std::shared_ptr<Job>> jobs;
  {
    std::lock_guard lock(jobs_mutex_);
    jobs.swap(jobs_);
  }
  for (auto& [_, j] : jobs) j->thread.request_stop();
  for (auto& [_, j] : jobs)
    if (j->thread.joinable()) j->thread.join();
}

std::shared_ptr<const intent::IntentPipeline> Service::model() const {
  std::lock_guard lock(model_mutex_);
  return model_;
}

void Service::set_model(std::shared_ptr<const intent::IntentPipeline> m) {
  std::lock_guard lock(model_mutex_);
  model_ = std::move(m);
}

void Service::publish(const std::string& session_id, const json& event) {
  const std::string text = event.dump();
  std::lock_guard lock(subs_mutex_);
  for (const auto& [_, sub] : subscribers_)
    if (sub.first == session_id) sub.second(text);
}

std::uint64_t Service::subscribe(const std::string& session_id, Subscriber s) {
  engine_->get(session_id);
  std::lock_guard lock(subs_mutex_);
  const auto token = next_token_++;
  subscribers_[token] = {session_id, std::move(s)};
  return token;
}

void Service::unsubscribe(std::uint64_t token) {
  std::lock_guard lock(subs_mutex_);
  subscribers_.erase(token);
}

std::unique_ptr<StreamIntake> Service::open_stream(const std::string& session_id) {
  engine_->get(session_id);
  return std::make_unique<StreamIntake>(*this, session_id);
}

json Service::run_round(const std::string& id, const EegRecording& window, std::optional<std::uint64_t> seed) {
  const auto m = model();
  if (!m) throw StateError("no trained model is loaded; train one with POST /v1/models/train");
  const auto current = engine_->get(id);
  if (current.status == session::SessionStatus::finalized) throw StateError("session " + id + " is finalized");
  if (current.round_open()) throw StateError("round " + std::to_string(current.round_index()) + " is still waiting for ratings");
  const intent::Prediction pred = intent::predict_window(*m, window);
  const std::uint64_t s = seed ? *seed : derive_seed(fnv1a64(id), current.round_index() + 1);
  return session::to_json(engine_->start_round(id, pred, s));
}

Reply Service::handle(std::string_view method, std::string_view target, std::string_view body) {
  try {
    return route(method, split_path(target), body);
  } catch (const std::exception& e) {
    return error_reply(e);
  }
}

Reply Service::route(std::string_view method, const std::vector<std::string>& p, std::string_view body) {
  auto not_allowed = [] { return error_doc(405, "method_not_allowed", "method not allowed"); };
  if (p.size() == 1 && p[0] == "healthz") {
    if (method != "GET") return not_allowed();
    return json_reply(200, {{"status", "ok"},
                            {"sessions", engine_->session_ids().size()},
                            {"model_loaded", model() != nullptr},
                            {"gateway", cfg_.gateway_mode == GatewayMode::mock ? "mock" : "remote"}});
  }
  if (p.size() < 2 || p[0] != "v1") return error_doc(404, "not_found", "no such route");

  if (p[1] == "sessions") {
    if (p.size() == 2) {
      if (method == "GET") return json_reply(200, {{"sessions", engine_->session_ids()}});
      if (method == "POST")
        return create_session(parse_body(
            body, {"participant_id", "session_id", "base_image", "base_image_b64", "min_rounds", "shuffle"}));
      return not_allowed();
    }
    const std::string& id = p[2];
    if (p.size() == 3) {
      if (method != "GET") return not_allowed();
      return json_reply(200, session::to_json(engine_->get(id)));
    }
    if (p.size() == 4 && p[3] == "rounds") {
      if (method != "POST") return not_allowed();
      return post_round(id, parse_body(body, {"window", "replay", "seed"}));
    }
    if (p.size() == 4 && p[3] == "ratings") {
      if (method != "POST") return not_allowed();
      return post_ratings(id, parse_body(body, {"ratings", "final_mark"}));
    }
    if (p.size() == 4 && p[3] == "report") {
      if (method != "GET") return not_allowed();
      return json_reply(200, session::to_json(engine_->report(id)));
    }
    return error_doc(404, "not_found", "no such route");
  }

  if (p[1] == "models") {
    if (p.size() == 3 && p[2] == "train") {
      if (method != "POST") return not_allowed();
      return start_training(parse_body(body, {"dataset", "C", "gamma", "folds", "seed"}));
    }
    if (p.size() == 4 && p[2] == "train") {
      std::shared_ptr<Job> job;
      {
        std::lock_guard lock(jobs_mutex_);
        auto it = jobs_.find(p[3]);
        if (it == jobs_.end()) throw NotFoundError("training job '" + p[3] + "' not found");
        job = it->second;
      }
      if (method == "GET") return json_reply(200, job_json(*job));
      if (method == "DELETE") {
        job->thread.request_stop();
        return json_reply(202, job_json(*job));
      }
      return not_allowed();
    }
    if (p.size() == 3 && p[2] == "current") {
      if (method != "GET") return not_allowed();
      const auto m = model();
      if (!m) throw NotFoundError("no model loaded");
      return json_reply(200, {{"feature_fingerprint", m->model.feature_fingerprint},
                              {"dims", m->model.dims()},
                              {"features", intent::to_json(m->features)},
                              {"cv", intent::to_json(m->model.cv)}});
    }
    return error_doc(404, "not_found", "no such route");
  }

  if (p[1] == "artifacts" && p.size() == 4 && p[2] == "images") {
    if (method != "GET") return not_allowed();
    const gateway::ImageRef ref{"images/" + p[3]};
    if (!engine_->store().resolvable(ref)) throw NotFoundError("image " + p[3] + " not found");
    const std::string ext(gateway::image_extension(engine_->store().read(ref)));
    const std::string type = ext == "ppm" ? "image/x-portable-pixmap"
                             : ext == "png" ? "image/png"
                             : ext == "jpg" ? "image/jpeg"
                                            : "application/octet-stream";
    return {200, engine_->store().read(ref), type};
  }
  return error_doc(404, "not_found", "no such route");
}

Reply Service::create_session(const json& b) {
  const auto participant = field<std::string>(b, "participant_id");
  if (participant.empty()) throw FieldError("participant_id", "must not be empty");
  session::SessionConfig sc = cfg_.session;
  if (b.contains("min_rounds")) {
    if (!b["min_rounds"].is_number_unsigned() || b["min_rounds"].get<std::uint64_t>() == 0)
      throw FieldError("min_rounds", "must be a positive integer");
    sc.min_rounds = b["min_rounds"].get<std::size_t>();
  }
  if (b.contains("shuffle")) sc.shuffle = field<bool>(b, "shuffle");
  if (b.contains("base_image") && b.contains("base_image_b64"))
    throw FieldError("base_image", "give either base_image or base_image_b64, not both");
  gateway::ImageRef base;
  if (b.contains("base_image")) {
    base.path = field<std::string>(b, "base_image");
  } else if (b.contains("base_image_b64")) {
    std::string bytes;
    try {
      bytes = base64_decode(field<std::string>(b, "base_image_b64"));
    } catch (const ParseError& e) {
      throw FieldError("base_image_b64", e.what());
    }
    if (bytes.empty()) throw FieldError("base_image_b64", "must not be empty");
    base = engine_->store().put_image(bytes);
  } else {
    base = gateway::placeholder_image(engine_->store());
  }
  const std::string id = b.contains("session_id") ? field<std::string>(b, "session_id") : std::string{};
  const auto s = engine_->create(participant, base, sc, id);
  return json_reply(201, session::to_json(s));
}

Reply Service::post_round(const std::string& id, const json& b) {
  if (b.contains("window") == b.contains("replay")) throw FieldError("window", "give exactly one of window or replay");
  EegRecording window;
  if (b.contains("window")) {
    if (!b["window"].is_object()) throw FieldError("window", "must be an object");
    window = window_from_json(b["window"]);
  } else {
    const json& r = b["replay"];
    if (!r.is_object()) throw FieldError("replay", "must be an object");
    for (const auto& [k, _] : r.items())
      if (k != "path" && k != "offset_s" && k != "duration_s") throw FieldError("replay." + k, "unknown field");
    const auto rec = ingest::load_recording(field<std::string>(r, "path"));
    const double offset = r.contains("offset_s") ? field<double>(r, "offset_s") : 0.0;
    const auto m = model();
    const double duration = r.contains("duration_s") ? field<double>(r, "duration_s")
                                                     : (m ? m->features.window_s : cfg_.features.window_s);
    window = slice(rec, offset, duration);
  }
  return json_reply(201, run_round(id, window, optional_seed(b)));
}

Reply Service::post_ratings(const std::string& id, const json& b) {
  std::optional<session::Ratings> ratings;
  if (b.contains("ratings") && !b["ratings"].is_null()) {
    const json& r = b["ratings"];
    if (!r.is_array() || r.size() != session::kCandidatesPerRound)
      throw FieldError("ratings", "must be an array of 5 integers");
    session::Ratings v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string name = "ratings[" + std::to_string(i) + "]";
      if (!r[i].is_number_integer()) throw FieldError(name, "must be an integer in 1..7");
      const auto x = r[i].get<long long>();
      if (x < 1 || x > 7) throw FieldError(name, "must be an integer in 1..7");
      v[i] = static_cast<int>(x);
    }
    ratings = v;
  }
  std::optional<std::size_t> final_mark;
  if (b.contains("final_mark") && !b["final_mark"].is_null()) {
    if (!b["final_mark"].is_number_unsigned() || b["final_mark"].get<std::uint64_t>() >= session::kCandidatesPerRound)
      throw FieldError("final_mark", "must be a candidate id 0..4");
    final_mark = b["final_mark"].get<std::size_t>();
  }
  const auto s = engine_->submit(id, ratings, final_mark);
  const auto& last = s.history.back();
  json outcome = {{"round", last.index},
                  {"selected", last.selected ? json(*last.selected) : json(nullptr)},
                  {"finalized", s.status == session::SessionStatus::finalized},
                  {"next_base_image", s.base_image.path}};
  return json_reply(200, {{"outcome", outcome}, {"session", session::to_json(s)}});
}

json Service::job_json(const Job& j) const {
  std::lock_guard lock(j.mutex);
  json out = {{"job_id", j.id},
              {"dataset", j.dataset},
              {"status", to_string(j.state)},
              {"progress", {{"fold", j.progress.fold}, {"folds", j.progress.folds}}}};
  if (j.cv) out["cv"] = intent::to_json(*j.cv);
  if (!j.model_path.empty()) out["model_path"] = j.model_path;
  if (!j.error.empty()) out["error"] = j.error;
  return out;
}

Reply Service::start_training(const json& b) {
  const auto dataset = field<std::string>(b, "dataset");
  if (!fs::is_directory(dataset)) throw FieldError("dataset", "directory '" + dataset + "' not found");
  TrainingDefaults t = cfg_.training;
  if (b.contains("C")) {
    t.svm.C = field<double>(b, "C");
    if (!(t.svm.C > 0)) throw FieldError("C", "must be positive");
  }
  if (b.contains("gamma")) {
    if (b["gamma"].is_string()) {
      if (b["gamma"] != "scale") throw FieldError("gamma", "must be \"scale\" or a positive number");
      t.svm.gamma_mode = intent::GammaMode::scale;
    } else {
      t.svm.gamma_mode = intent::GammaMode::fixed;
      t.svm.gamma = field<double>(b, "gamma");
      if (!(t.svm.gamma > 0)) throw FieldError("gamma", "must be \"scale\" or a positive number");
    }
  }
  if (b.contains("folds")) {
    t.folds = field<std::size_t>(b, "folds");
    if (t.folds < 2) throw FieldError("folds", "must be at least 2");
  }
  if (b.contains("seed")) t.seed = field<std::uint64_t>(b, "seed");

  auto job = std::make_shared<Job>();
  {
    std::lock_guard lock(jobs_mutex_);
    job->id = "job-" + std::to_string(next_job_++);
    jobs_[job->id] = job;
  }
  job->dataset = dataset;
  const fs::path model_path = cfg_.artifacts_dir / "models" / (job->id + ".json");
  Job* raw = job.get();
  job->thread = std::jthread([this, raw, t, dataset, model_path](std::stop_token stop) {
    lower_thread_priority();
    {
      std::lock_guard lock(raw->mutex);
      raw->state = JobState::running;
    }
    try {
      ingest::LabeledSegmentSet all;
      all.participant_id = "dataset";
      all.source = dataset;
      for (const auto& p : ingest::list_participants(dataset)) {
        auto set = ingest::load_segment_set(p);
        if (!set.has_command_labels()) continue;
        for (auto& s : set.segments) all.segments.push_back(std::move(s));
      }
      if (all.segments.empty()) throw InvalidArgument("dataset holds no command-labeled segments");
      intent::TrainOptions opts;
      opts.svm = t.svm;
      opts.folds = t.folds;
      opts.seed = t.seed;
      opts.stop = stop;
      opts.progress = [raw](const intent::TrainProgress& p) {
        std::lock_guard lock(raw->mutex);
        raw->progress = p;
      };
      auto pipe = intent::train_pipeline(all, cfg_.features, opts);
      intent::save_pipeline(pipe, model_path,
                            {{"provenance", {{"dataset", dataset}, {"seed", t.seed}, {"folds", t.folds}}}});
      const auto cv = pipe.model.cv;
      set_model(std::make_shared<const intent::IntentPipeline>(std::move(pipe)));
      std::lock_guard lock(raw->mutex);
      raw->cv = cv;
      raw->model_path = model_path.string();
      raw->state = JobState::succeeded;
    } catch (const CancelledError&) {
      std::lock_guard lock(raw->mutex);
      raw->state = JobState::cancelled;
    } catch (const std::exception& e) {
      std::lock_guard lock(raw->mutex);
      raw->state = JobState::failed;
      raw->error = e.what();
    }
  });
  return json_reply(202, job_json(*job));
}

StreamOutcome StreamIntake::on_message(std::string_view text) {
  StreamOutcome out;
  auto close = [&](std::uint16_t code, std::string reason) {
    // Close reasons are limited to 123 bytes by the protocol.
    if (reason.size() > 120) reason.resize(120);
    out.close = std::make_pair(code, std::move(reason));
    return out;
  };
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error&) {
    return close(kCloseMalformed, "malformed: not JSON");
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    return close(kCloseMalformed, "malformed: missing type");
  const auto type = msg["type"].get<std::string>();
  if (type == "end") return close(1000, "end");
  if (type != "chunk") return close(kCloseMalformed, "malformed: unknown type '" + type + "'");
  for (const auto& [k, _] : msg.items())
    if (k != "type" && k != "sample_rate" && k != "data" && k != "seed")
      return close(kCloseMalformed, "malformed: unknown field '" + k + "'");

  double fs = sample_rate_;
  if (msg.contains("sample_rate")) {
    if (!msg["sample_rate"].is_number() || !(msg["sample_rate"].get<double>() > 0))
      return close(kCloseMalformed, "malformed: sample_rate must be positive");
    fs = msg["sample_rate"].get<double>();
    if (sample_rate_ > 0 && fs != sample_rate_) return close(kCloseMalformed, "malformed: sample_rate changed");
  }
  if (!(fs > 0)) return close(kCloseMalformed, "malformed: first chunk needs sample_rate");
  std::vector<std::vector<double>> rows;
  try {
    rows = msg.at("data").get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    return close(kCloseMalformed, "malformed: data must be per-channel arrays of numbers");
  }
  if (rows.empty() || rows.front().empty()) return close(kCloseMalformed, "malformed: empty chunk");
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) return close(kCloseMalformed, "malformed: ragged chunk");
    for (double v : r)
      if (!std::isfinite(v)) return close(kCloseMalformed, "malformed: non-finite sample");
  }
  std::optional<std::uint64_t> seed;
  if (msg.contains("seed")) {
    if (!msg["seed"].is_number_unsigned()) return close(kCloseMalformed, "malformed: seed");
    seed = msg["seed"].get<std::uint64_t>();
  }

  if (channels_ == 0) {
    std::size_t expected = rows.size();
    if (const auto m = svc_.model(); m && m->features.kind == spectral::FeatureKind::log_band_power)
      expected = m->model.dims() / spectral::kBandCount;
    if (rows.size() != expected)
      return close(kCloseChannelMismatch, "channel mismatch: got " + std::to_string(rows.size()) + ", expected " +
                                              std::to_string(expected));
    channels_ = rows.size();
    buffer_.assign(channels_, {});
  } else if (rows.size() != channels_) {
    return close(kCloseChannelMismatch, "channel mismatch: got " + std::to_string(rows.size()) + ", expected " +
                                            std::to_string(channels_));
  }
  sample_rate_ = fs;
  for (std::size_t ch = 0; ch < channels_; ++ch) buffer_[ch].insert(buffer_[ch].end(), rows[ch].begin(), rows[ch].end());

  const auto m = svc_.model();
  const double window_s = m ? m->features.window_s : svc_.config().features.window_s;
  const auto needed = static_cast<std::size_t>(std::llround(window_s * sample_rate_));
  if (buffer_.front().size() < needed) {
    out.replies.push_back(json{{"type", "accepted"}, {"buffered", buffer_.front().size()}, {"needed", needed}}.dump());
    return out;
  }
  EegRecording window;
  window.sample_rate = sample_rate_;
  window.channel_names = default_channel_names(channels_);
  window.data = Matrix(channels_, needed);
  for (std::size_t ch = 0; ch < channels_; ++ch)
    for (std::size_t i = 0; i < needed; ++i) window.data(ch, i) = buffer_[ch][i];
  for (auto& b : buffer_) b.clear();
  try {
    const json round = svc_.run_round(session_id_, window, seed);
    out.replies.push_back(json{{"type", "candidates_ready"}, {"session_id", session_id_}, {"round", round}}.dump());
  } catch (const StateError& e) {
    return close(kCloseState, std::string("state: ") + e.what());
  } catch (const NotFoundError& e) {
    return close(kCloseState, std::string("state: ") + e.what());
  } catch (const InvalidArgument& e) {
    return close(kCloseChannelMismatch, std::string("rejected: ") + e.what());
  } catch (const std::exception& e) {
    return close(kCloseInternal, std::string("internal: ") + e.what());
  }
  return out;
}

}  // namespace mentalgen::service
