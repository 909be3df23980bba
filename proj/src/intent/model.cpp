#include "mentalgen/intent/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>


namespace mentalgen::intent {

void TrainingSet::validate() const {
  if (features.rows() != labels.size()) throw InvalidArgument("features and labels differ in length");
  for (double v : features.flat())
    if (!std::isfinite(v)) throw NonFiniteError("training features contain non-finite values");
  std::array<bool, kCommandCount> seen{};
  for (Command c : labels) seen[index_of(c)] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2) throw InvalidArgument("training set needs at least 2 distinct labels");
}

double resolve_gamma(const SvmParams& params, const Matrix& x) {
  if (params.gamma_mode == GammaMode::fixed) {
    if (!(params.gamma > 0.0)) throw InvalidArgument("fixed gamma must be positive");
    return params.gamma;
  }
  const auto flat = x.flat();
  if (flat.empty()) throw InvalidArgument("cannot derive gamma from empty features");
  double mean = 0.0;
  for (double v : flat) mean += v;
  mean /= static_cast<double>(flat.size());
  double var = 0.0;
  for (double v : flat) var += (v - mean) * (v - mean);
  var /= static_cast<double>(flat.size());
  const double d = static_cast<double>(x.cols());
  return var > 0.0 ? 1.0 / (d * var) : 1.0 / d;
}

std::array<double, kCommandCount> softmax(const std::array<double, kCommandCount>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  std::array<double, kCommandCount> out{};
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += (out[i] = std::exp(v[i] - mx));
  for (double& p : out) p /= sum;
  return out;
}

Prediction prediction_from_decisions(const std::array<double, kCommandCount>& decision_values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kCommandCount; ++i)
    if (decision_values[i] > decision_values[best]) best = i;
  const auto p = softmax(decision_values);
  return {kAllCommands[best], p[best], decision_values};
}

namespace {

std::array<BinarySvm, kCommandCount> fit_machines(const Matrix& x, std::span<const std::size_t> classes, double C,
                                                  double gamma, double tol) {
  std::array<BinarySvm, kCommandCount> out;
  std::vector<int> y(classes.size());
  for (std::size_t c = 0; c < kCommandCount; ++c) {
    for (std::size_t i = 0; i < classes.size(); ++i) y[i] = classes[i] == c ? 1 : -1;
    out[c] = train_binary_svm(x, y, C, gamma, {tol, 0});
  }
  return out;
}

Prediction decide(const std::array<BinarySvm, kCommandCount>& machines, std::span<const double> z) {
  std::array<double, kCommandCount> dv{};
  for (std::size_t c = 0; c < kCommandCount; ++c) dv[c] = machines[c].decision(z);
  return prediction_from_decisions(dv);
}

}  // namespace

IntentModel train_intent_model(const TrainingSet& ts, const TrainOptions& opts) {
  ts.validate();
  std::vector<std::size_t> classes(ts.labels.size());
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i] = index_of(ts.labels[i]);
  // Every command needs a positive class for its one-vs-rest machine.
  for (Command c : kAllCommands)
    if (std::find(ts.labels.begin(), ts.labels.end(), c) == ts.labels.end())
      throw InvalidArgument("no samples for command " + std::string(to_string(c)));
  const auto fold_of = stratified_folds(classes, opts.folds, opts.seed);

  IntentModel model;
  model.params = opts.svm;
  model.feature_fingerprint = opts.feature_fingerprint;
  model.cv.folds = opts.folds;
  std::array<std::size_t, kCommandCount> class_total{}, class_correct{};

  for (std::size_t f = 0; f < opts.folds; ++f) {
    if (opts.stop.stop_requested()) throw CancelledError();
    if (opts.progress) opts.progress({f + 1, opts.folds});
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);

    const Matrix train_raw = ts.features.select_rows(train_idx);
    const NormStats norm = zscore_fit(train_raw);
    const Matrix train = zscore_apply(norm, train_raw);
    std::vector<std::size_t> train_classes;
    for (std::size_t i : train_idx) train_classes.push_back(classes[i]);
    const double gamma = resolve_gamma(opts.svm, train);
    const auto machines = fit_machines(train, train_classes, opts.svm.C, gamma, opts.svm.tol);

    std::size_t correct = 0;
    for (std::size_t i : test_idx) {
      const auto z = zscore_apply(norm, ts.features.row(i));
      const auto pred = decide(machines, z);
      const std::size_t predicted = index_of(pred.command);
      ++model.cv.confusion[classes[i]][predicted];
      ++class_total[classes[i]];
      if (predicted == classes[i]) {
        ++correct;
        ++class_correct[classes[i]];
      }
    }
    model.cv.fold_accuracy.push_back(test_idx.empty() ? 0.0
                                                      : static_cast<double>(correct) / static_cast<double>(test_idx.size()));
  }
  double sum = 0.0;
  for (double a : model.cv.fold_accuracy) sum += a;
  model.cv.overall_accuracy = sum / static_cast<double>(model.cv.fold_accuracy.size());
  for (std::size_t c = 0; c < kCommandCount; ++c)
    model.cv.per_command[c] =
        class_total[c] ? static_cast<double>(class_correct[c]) / static_cast<double>(class_total[c]) : 0.0;

  if (opts.stop.stop_requested()) throw CancelledError();
  if (opts.progress) opts.progress({opts.folds + 1, opts.folds});
  model.norm = zscore_fit(ts.features);
  const Matrix all = zscore_apply(model.norm, ts.features);
  model.gamma = resolve_gamma(opts.svm, all);
  model.machines = fit_machines(all, classes, opts.svm.C, model.gamma, opts.svm.tol);
  return model;
}

Prediction predict(const IntentModel& model, std::span<const double> features) {
  if (features.size() != model.dims())
    throw InvalidArgument("expected " + std::to_string(model.dims()) + " features, got " + std::to_string(features.size()));
  for (double v : features)
    if (!std::isfinite(v)) throw NonFiniteError("prediction input contains non-finite values");
  return decide(model.machines, zscore_apply(model.norm, features));
}

}  // namespace mentalgen::intent
