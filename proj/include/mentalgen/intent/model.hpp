#pragma once

#include <array>
#include <functional>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "mentalgen/intent/svm.hpp"
#include "mentalgen/signal/types.hpp"
#include "mentalgen/signal/zscore.hpp"

namespace mentalgen::intent {

struct TrainingSet {
  Matrix features;  // samples x d
  std::vector<Command> labels;

  /// Throws unless lengths agree, features are finite and >= 2 labels occur.
  void validate() const;
};

enum class GammaMode { scale, fixed };

struct SvmParams {
  double C = 1.0;
  GammaMode gamma_mode = GammaMode::scale;
  double gamma = 0.0;  // used when gamma_mode == fixed
  double tol = 1e-3;
};

/// scale: 1 / (d * variance of all entries of x); fixed: params.gamma.
double resolve_gamma(const SvmParams& params, const Matrix& x);

/// Fold index per sample. Each class is shuffled with `seed` and dealt
/// round-robin, continuing across classes, so every fold holds floor or
/// ceil of n_c / folds samples of class c.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> classes, std::size_t folds, std::uint64_t seed);

struct CvReport {
  std::size_t folds = 0;
  double overall_accuracy = 0.0;                    // mean of fold accuracies
  std::array<double, kCommandCount> per_command{};  // pooled recall per command
  std::vector<double> fold_accuracy;
  std::array<std::array<std::size_t, kCommandCount>, kCommandCount> confusion{};  // [true][predicted]
};

struct Prediction {
  Command command = Command::IncreaseTransparency;
  double confidence = 0.0;
  std::array<double, kCommandCount> decision_values{};
};

/// argmax (lowest index on exact ties) and max softmax probability.
Prediction prediction_from_decisions(const std::array<double, kCommandCount>& decision_values);

/// Numerically stable softmax.
std::array<double, kCommandCount> softmax(const std::array<double, kCommandCount>& v);

/// One-vs-rest RBF machines over Z-scored features.
struct IntentModel {
  std::array<BinarySvm, kCommandCount> machines;
  NormStats norm;
  SvmParams params;
  double gamma = 0.0;
  std::string feature_fingerprint;
  CvReport cv;

  std::size_t dims() const noexcept { return norm.features(); }
};

struct TrainProgress {
  std::size_t fold = 0;  // 1-based; folds + 1 during the final refit
  std::size_t folds = 0;
};

struct TrainOptions {
  SvmParams svm;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::string feature_fingerprint;
  std::function<void(const TrainProgress&)> progress;
  std::stop_token stop;
};

/// Stratified k-fold CV (Z-score fit on each training split only), then a
/// refit on all samples. Throws CancelledError when `stop` is requested.
IntentModel train_intent_model(const TrainingSet& ts, const TrainOptions& opts);

/// Rejects wrong-length or non-finite input.
Prediction predict(const IntentModel& model, std::span<const double> features);

}  // namespace mentalgen::intent
