#include "mentalgen/spectral/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mentalgen/signal/epoch.hpp"
#include "mentalgen/spectral/bands.hpp"

namespace mentalgen::spectral {

namespace {

constexpr double kLogFloor = 1e-30;

double safe_log(double p) { return std::log(std::max(p, kLogFloor)); }

void append_log_bins(const PsdEstimate& psd, std::vector<double>& out) {
  const double lo = kBands.front().low;
  const double hi = kBands.back().high;
  for (std::size_t ch = 0; ch < psd.power.rows(); ++ch)
    for (std::size_t k = 0; k < psd.freqs.size(); ++k)
      if (psd.freqs[k] >= lo && psd.freqs[k] <= hi) out.push_back(safe_log(psd.power(ch, k)));
}

void center_per_channel(std::vector<double>& v, std::size_t channels) {
  const std::size_t per = v.size() / channels;
  for (std::size_t ch = 0; ch < channels; ++ch) {
    double mean = 0.0;
    for (std::size_t i = 0; i < per; ++i) mean += v[ch * per + i];
    mean /= static_cast<double>(per);
    for (std::size_t i = 0; i < per; ++i) v[ch * per + i] -= mean;
  }
}

}  // namespace

std::string_view to_string(FeatureKind k) noexcept {
  return k == FeatureKind::log_band_power ? "log_band_power" : "log_psd_bins";
}

FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "log_band_power") return FeatureKind::log_band_power;
  if (s == "log_psd_bins") return FeatureKind::log_psd_bins;
  throw InvalidArgument("unknown feature kind '" + std::string(s) + "'");
}

std::string FeatureConfig::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "filter=" << filter.low_cut << "-" << filter.high_cut << "/o" << filter.order << ";ica=" << apply_ica;
  if (apply_ica) os << "/k" << ica.kurtosis_threshold << "/s" << ica.seed;
  os << ";window=" << window_s << "/" << overlap_s << ";welch=" << welch.segment_samples << "/"
     << welch.overlap_fraction << ";kind=" << to_string(kind)
     << ";relative=" << channel_relative;
  return os.str();
}

EegRecording preprocess(const EegRecording& raw, const FeatureConfig& cfg) {
  raw.validate();
  EegRecording rec = bandpass_filter(raw, cfg.filter);
  if (cfg.apply_ica) rec = remove_artifacts_ica(rec, cfg.ica).cleaned;
  return rec;
}

std::vector<double> window_features(const Epoch& epoch, const FeatureConfig& cfg) {
  const PsdEstimate psd = welch_psd(epoch, cfg.welch);
  std::vector<double> out;
  if (cfg.kind == FeatureKind::log_band_power) {
    const auto bp = band_powers(psd);
    out.reserve(bp.values.size());
    for (double v : bp.values) out.push_back(safe_log(v));
  } else {
    append_log_bins(psd, out);
  }
  if (cfg.channel_relative) center_per_channel(out, psd.power.rows());
  return out;
}

Matrix recording_features(const EegRecording& raw, const FeatureConfig& cfg) {
  const EegRecording rec = preprocess(raw, cfg);
  Matrix out;
  for (const auto& ep : epoch_windows(rec, cfg.window_s, cfg.overlap_s)) out.append_row(window_features(ep, cfg));
  return out;
}

std::vector<double> segment_psd_features(const EegRecording& raw, const FeatureConfig& cfg) {
  const EegRecording rec = preprocess(raw, cfg);
  const std::size_t seg = cfg.welch.segment_samples ? cfg.welch.segment_samples
                                                    : static_cast<std::size_t>(std::llround(rec.sample_rate));
  const PsdEstimate psd = welch_psd(rec.data, rec.sample_rate, std::min(seg, rec.samples()), cfg.welch.overlap_fraction);
  std::vector<double> out;
  append_log_bins(psd, out);
  if (cfg.channel_relative) center_per_channel(out, psd.power.rows());
  return out;
}

}  // namespace mentalgen::spectral
