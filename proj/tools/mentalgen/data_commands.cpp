#include <iomanip>
#include <iostream>
#include <memory>

#include "cli.hpp"
#include "mentalgen/cluster/report.hpp"
#include "mentalgen/core/random.hpp"
#include "mentalgen/ingest/csv.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/spectral/features.hpp"

namespace mentalgen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SynthArgs {
  std::string kind = "commands";
  fs::path out;
  std::size_t participants = 1;
  std::size_t n_per_class = 20;
  std::size_t classes = 5;
  double noise = 1.0;
  double duration = 2.0;
  std::size_t k = 5;
  std::size_t per_blob = 40;
  std::size_t dims = 2;
  double separation = 10.0;
  double spread = 1.0;
};

void run_synth(const SynthArgs& a, const Globals& g) {
  json summary = {{"provenance", provenance(g, "synth")}, {"kind", a.kind}, {"out", a.out.string()}};
  if (a.kind == "blobs") {
    const auto fx = ingest::gaussian_blobs(a.k, a.per_blob, a.dims, a.separation, a.spread, g.seed);
    json pts = json::array();
    for (std::size_t r = 0; r < fx.points.rows(); ++r) {
      auto row = fx.points.row(r);
      pts.push_back(std::vector<double>(row.begin(), row.end()));
    }
    write_json(a.out, {{"v", 1}, {"points", pts}, {"truth", fx.truth}, {"provenance", provenance(g, "synth")}});
    summary["points"] = fx.points.rows();
  } else {
    std::size_t written = 0;
    for (std::size_t p = 0; p < a.participants; ++p) {
      char pid[16];
      std::snprintf(pid, sizeof pid, "p%02zu", p + 1);
      ingest::SynthSpec spec;
      if (a.kind == "commands") {
        spec = ingest::command_synth_spec(a.n_per_class, a.noise, derive_seed(g.seed, p), a.duration);
      } else if (a.kind == "features") {
        spec = ingest::feature_synth_spec(a.classes, a.n_per_class, a.noise, derive_seed(g.seed, p));
        spec.duration_s = a.duration;
      } else {
        throw InvalidArgument("synth kind must be commands, features or blobs");
      }
      spec.participant_id = pid;
      const auto set = ingest::synth_generate(spec);
      ingest::save_segment_set(set, a.out / pid);
      written += set.segments.size();
    }
    summary["participants"] = a.participants;
    summary["segments"] = written;
  }
  std::cout << summary.dump(1) << std::endl;
}

struct PreprocessArgs {
  fs::path in, out;
  bool ica = false;
  double low = 0.5, high = 45.0;
  int order = 8;
  double kurtosis = 5.0;
};

void run_preprocess(const PreprocessArgs& a, const Globals& g) {
  const EegRecording raw = ingest::load_recording(a.in);
  FilterSpec spec{a.low, a.high, a.order};
  EegRecording rec = bandpass_filter(raw, spec);
  json summary = {{"provenance", provenance(g, "preprocess")},
                  {"in", a.in.string()},
                  {"out", a.out.string()},
                  {"filter", {{"low_cut", a.low}, {"high_cut", a.high}, {"order", a.order}}}};
  if (a.ica) {
    IcaConfig cfg;
    cfg.seed = g.seed;
    cfg.kurtosis_threshold = a.kurtosis;
    const auto res = remove_artifacts_ica(rec, cfg);
    rec = res.cleaned;
    summary["ica"] = {{"status", res.status == IcaStatus::ok ? "ok" : "not_converged"},
                      {"rejected", res.rejected},
                      {"excess_kurtosis", res.excess_kurtosis}};
  }
  ingest::save_recording(rec, a.out);
  std::cout << summary.dump(1) << std::endl;
}

struct ClusterArgs {
  fs::path dataset, points, out;
  std::size_t k_min = 2, k_max = 8, pca = 2, restarts = 10;
};

Matrix points_from_json(const json& doc) {
  try {
    return Matrix::from_rows(doc.at("points").get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("points file: ") + e.what(), 0);
  }
}

void print_table(const cluster::StudyReport& r) {
  std::cout << "participants: " << r.participants.size() << "  chosen k: " << r.chosen_k << "\n";
  std::cout << std::left << std::setw(20) << "feature" << std::setw(18) << "weighted_purity" << std::setw(14)
            << "v_measure" << std::setw(14) << "homogeneity" << "completeness\n";
  std::cout << std::fixed << std::setprecision(4);
  for (SpatialFeature f : kAllFeatures) {
    const auto i = static_cast<std::size_t>(f);
    std::cout << std::setw(20) << to_string(f) << std::setw(18)
              << (r.mean_purity[i] ? std::to_string(*r.mean_purity[i]) : std::string("n/a")) << std::setw(14)
              << r.mean_v[i].v << std::setw(14) << r.mean_v[i].homogeneity << r.mean_v[i].completeness << "\n";
  }
}

void run_cluster_eval(const ClusterArgs& a, const Globals& g) {
  if (a.dataset.empty() == a.points.empty()) throw InvalidArgument("give exactly one of --dataset or --points");
  if (a.k_min < 2 || a.k_max < a.k_min) throw InvalidArgument("need 2 <= k-min <= k-max");
  cluster::KMeansOptions km;
  km.restarts = a.restarts;
  json doc;
  if (!a.points.empty()) {
    const Matrix pts = points_from_json(read_json(a.points));
    std::vector<std::size_t> ks;
    for (std::size_t k = a.k_min; k <= a.k_max; ++k) ks.push_back(k);
    const auto sel = cluster::select_k(pts, ks, g.seed, {}, km);
    doc = cluster::to_json(sel);
    doc["source"] = a.points.string();
  } else {
    std::vector<cluster::ParticipantData> parts;
    spectral::FeatureConfig fc;
    for (const auto& dir : ingest::list_participants(a.dataset)) {
      const auto set = ingest::load_segment_set(dir);
      if (!set.has_feature_labels())
        throw InvalidArgument("participant " + set.participant_id + " has no feature labels");
      cluster::ParticipantData pd;
      pd.participant_id = set.participant_id;
      for (const auto& seg : set.segments) {
        pd.features.append_row(spectral::segment_psd_features(seg.recording, fc));
        pd.labels.push_back(std::get<FeatureLabels>(seg.label));
      }
      parts.push_back(std::move(pd));
    }
    if (parts.empty()) throw NotFoundError("no participants found under " + a.dataset.string());
    cluster::StudyConfig sc;
    sc.pca_components = a.pca;
    sc.k_min = a.k_min;
    sc.k_max = a.k_max;
    sc.seed = g.seed;
    sc.kmeans = km;
    const auto report = cluster::cluster_study(parts, sc);
    doc = cluster::to_json(report);
    doc["source"] = a.dataset.string();
    if (!a.out.empty()) print_table(report);
  }
  doc["provenance"] = provenance(g, "cluster-eval");
  if (a.out.empty()) std::cout << doc.dump(1) << std::endl;
  else write_json(a.out, doc);
}

}  // namespace

void register_data_commands(CLI::App& app, Globals& g) {
  auto synth = std::make_shared<SynthArgs>();
  auto* s = app.add_subcommand("synth", "Write a synthetic dataset (commands, features) or point set (blobs)");
  s->add_option("kind", synth->kind, "commands | features | blobs")
      ->required()
      ->check(CLI::IsMember({"commands", "features", "blobs"}));
  s->add_option("--out", synth->out, "Dataset directory, or JSON file for blobs")->required();
  s->add_option("--participants", synth->participants, "Participants to generate")->capture_default_str();
  s->add_option("--n-per-class", synth->n_per_class, "Segments per class")->capture_default_str();
  s->add_option("--classes", synth->classes, "Classes for the features kind")->capture_default_str();
  s->add_option("--noise", synth->noise, "White noise sigma in microvolts")->capture_default_str();
  s->add_option("--duration", synth->duration, "Segment length in seconds")->capture_default_str();
  s->add_option("--k", synth->k, "Blob count")->capture_default_str();
  s->add_option("--per-blob", synth->per_blob, "Points per blob")->capture_default_str();
  s->add_option("--dims", synth->dims, "Blob dimensionality")->capture_default_str();
  s->add_option("--separation", synth->separation, "Blob center distance scale")->capture_default_str();
  s->add_option("--spread", synth->spread, "Blob standard deviation")->capture_default_str();
  s->callback([synth, &g] { run_synth(*synth, g); });

  auto pre = std::make_shared<PreprocessArgs>();
  auto* p = app.add_subcommand("preprocess", "Band-pass filter a recording, optionally with ICA cleanup");
  p->add_option("--in", pre->in, "Input EEG CSV")->required()->check(CLI::ExistingFile);
  p->add_option("--out", pre->out, "Output EEG CSV")->required();
  p->add_flag("--ica", pre->ica, "Remove high-kurtosis ICA components");
  p->add_option("--low", pre->low, "High-pass edge in Hz")->capture_default_str();
  p->add_option("--high", pre->high, "Low-pass edge in Hz")->capture_default_str();
  p->add_option("--order", pre->order, "Butterworth order per edge")->capture_default_str();
  p->add_option("--kurtosis", pre->kurtosis, "ICA rejection threshold on |excess kurtosis|")->capture_default_str();
  p->callback([pre, &g] { run_preprocess(*pre, g); });

  auto ce = std::make_shared<ClusterArgs>();
  auto* c = app.add_subcommand("cluster-eval", "Cluster segments or points and report validity and label agreement");
  c->add_option("--dataset", ce->dataset, "Dataset with feature-labeled participants");
  c->add_option("--points", ce->points, "JSON point set {\"points\": [[...]...]}");
  c->add_option("--out", ce->out, "Write the report here instead of stdout");
  c->add_option("--k-min", ce->k_min, "Smallest k")->capture_default_str();
  c->add_option("--k-max", ce->k_max, "Largest k")->capture_default_str();
  c->add_option("--pca", ce->pca, "PCA components per participant")->capture_default_str();
  c->add_option("--restarts", ce->restarts, "k-means restarts per k")->capture_default_str();
  c->callback([ce, &g] { run_cluster_eval(*ce, g); });
}

}  // namespace mentalgen::cli
