#include <iostream>
#include <memory>

#include "cli.hpp"
#include "mentalgen/ingest/csv.hpp"
#include "mentalgen/intent/persistence.hpp"
#include "mentalgen/intent/pipeline.hpp"

namespace mentalgen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TrainArgs {
  fs::path dataset, out;
  std::size_t folds = 10;
  double C = 1.0;
  std::string gamma = "scale";
  bool ica = false;
  std::string kind = "log_band_power";
};

ingest::LabeledSegmentSet load_command_dataset(const fs::path& dir) {
  ingest::LabeledSegmentSet all;
  all.participant_id = "dataset";
  all.source = dir.string();
  for (const auto& p : ingest::list_participants(dir)) {
    auto set = ingest::load_segment_set(p);
    if (!set.has_command_labels()) throw InvalidArgument("participant " + set.participant_id + " has no command labels");
    for (auto& s : set.segments) all.segments.push_back(std::move(s));
  }
  if (all.segments.empty()) throw NotFoundError("no participants found under " + dir.string());
  return all;
}

void run_train(const TrainArgs& a, const Globals& g) {
  spectral::FeatureConfig fc;
  fc.apply_ica = a.ica;
  fc.ica.seed = g.seed;
  fc.kind = spectral::parse_feature_kind(a.kind);
  intent::TrainOptions opts;
  opts.folds = a.folds;
  opts.seed = g.seed;
  opts.svm.C = a.C;
  if (a.gamma != "scale") {
    opts.svm.gamma_mode = intent::GammaMode::fixed;
    try {
      opts.svm.gamma = std::stod(a.gamma);
    } catch (const std::exception&) {
      throw FieldError("gamma", "must be \"scale\" or a positive number");
    }
  }
  const auto set = load_command_dataset(a.dataset);
  const auto pipe = intent::train_pipeline(set, fc, opts);
  const json prov = provenance(g, "train");
  intent::save_pipeline(pipe, a.out, {{"provenance", prov}, {"dataset", a.dataset.string()}});
  std::cout << json{{"model", a.out.string()}, {"cv", intent::to_json(pipe.model.cv)}, {"provenance", prov}}.dump(1)
            << std::endl;
}

struct PredictArgs {
  fs::path model, in;
  double offset = 0.0;
  double duration = 0.0;
};

void run_predict(const PredictArgs& a, const Globals& g) {
  const auto pipe = intent::load_pipeline(a.model);
  EegRecording rec = ingest::load_recording(a.in);
  const double duration = a.duration > 0 ? a.duration : rec.duration() - a.offset;
  const auto start = static_cast<std::size_t>(std::llround(a.offset * rec.sample_rate));
  const auto len = static_cast<std::size_t>(std::llround(duration * rec.sample_rate));
  if (a.offset < 0 || start + len > rec.samples() || len == 0)
    throw InvalidArgument("window exceeds the recording");
  EegRecording window = rec;
  window.data = Matrix(rec.channels(), len);
  for (std::size_t ch = 0; ch < rec.channels(); ++ch)
    for (std::size_t i = 0; i < len; ++i) window.data(ch, i) = rec.data(ch, start + i);
  const auto pred = intent::predict_window(pipe, window);
  std::cout << json{{"prediction", intent::to_json(pred)}, {"provenance", provenance(g, "predict")}}.dump(1)
            << std::endl;
}

}  // namespace

void register_model_commands(CLI::App& app, Globals& g) {
  auto tr = std::make_shared<TrainArgs>();
  auto* t = app.add_subcommand("train", "Train the intent model with stratified cross-validation");
  t->add_option("--dataset", tr->dataset, "Dataset with command-labeled participants")->required();
  t->add_option("--out", tr->out, "Model file to write")->required();
  t->add_option("--folds", tr->folds, "Cross-validation folds")->capture_default_str();
  t->add_option("--C", tr->C, "SVM box constraint")->capture_default_str();
  t->add_option("--gamma", tr->gamma, "RBF gamma: scale or a number")->capture_default_str();
  t->add_flag("--ica", tr->ica, "Run ICA artifact removal before feature extraction");
  t->add_option("--features", tr->kind, "log_band_power | log_psd_bins")
      ->capture_default_str()
      ->check(CLI::IsMember({"log_band_power", "log_psd_bins"}));
  t->callback([tr, &g] { run_train(*tr, g); });

  auto pr = std::make_shared<PredictArgs>();
  auto* p = app.add_subcommand("predict", "Predict the command of one EEG window");
  p->add_option("--model", pr->model, "Model file")->required();
  p->add_option("--in", pr->in, "EEG CSV holding the window")->required();
  p->add_option("--offset", pr->offset, "Window start in seconds")->capture_default_str();
  p->add_option("--duration", pr->duration, "Window length in seconds (default: rest of file)");
  p->callback([pr, &g] { run_predict(*pr, g); });
}

}  // namespace mentalgen::cli
