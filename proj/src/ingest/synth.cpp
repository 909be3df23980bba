#include "mentalgen/ingest/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mentalgen/core/random.hpp"

namespace mentalgen::ingest {

void SynthSpec::validate() const {
  if (classes.empty()) throw InvalidArgument("synth spec has zero classes");
  if (n_per_class == 0) throw InvalidArgument("n_per_class must be positive");
  if (!(sample_rate > 0) || channels == 0 || !(duration_s > 0))
    throw InvalidArgument("sample_rate, channels and duration_s must be positive");
  if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) throw InvalidArgument("noise_sigma must be >= 0");
  if (!(band_amplitude > 0) || tones_per_band == 0) throw InvalidArgument("band amplitude and tone count must be positive");
  if (sample_rate / 2 <= kToneRanges.back()[1]) throw InvalidArgument("sample_rate too low for the gamma tones");
  for (const auto& c : classes)
    for (double g : c.band_gain)
      if (!(g > 0) || !std::isfinite(g)) throw InvalidArgument("band amplitude multipliers must be > 0");
}

namespace {

EegRecording make_segment(const SynthSpec& spec, const ClassSignature& sig, Rng& rng) {
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
  EegRecording rec;
  rec.sample_rate = spec.sample_rate;
  rec.channel_names = default_channel_names(spec.channels);
  rec.data = Matrix(spec.channels, n, 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t ch = 0; ch < spec.channels; ++ch) {
    auto row = rec.data.row(ch);
    const double ch_gain = 0.8 + 0.4 * unit(rng);
    for (std::size_t b = 0; b < spectral::kBandCount; ++b) {
      const double amp = spec.band_amplitude * sig.band_gain[b] * ch_gain;
      for (std::size_t t = 0; t < spec.tones_per_band; ++t) {
        const double f = kToneRanges[b][0] + (kToneRanges[b][1] - kToneRanges[b][0]) * unit(rng);
        const double phase = two_pi * unit(rng);
        const double w = two_pi * f / spec.sample_rate;
        for (std::size_t i = 0; i < n; ++i) row[i] += amp * std::sin(w * static_cast<double>(i) + phase);
      }
    }
    if (spec.noise_sigma > 0)
      for (std::size_t i = 0; i < n; ++i) row[i] += spec.noise_sigma * noise(rng);
  }
  return rec;
}

}  // namespace

LabeledSegmentSet synth_generate(const SynthSpec& spec) {
  spec.validate();
  LabeledSegmentSet set;
  set.participant_id = spec.participant_id;
  set.source = "synth:seed=" + std::to_string(spec.seed);
  set.segments.reserve(spec.classes.size() * spec.n_per_class);
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
      Rng rng(derive_seed(derive_seed(spec.seed, c), i));
      set.segments.push_back({make_segment(spec, spec.classes[c], rng), spec.classes[c].label});
    }
  }
  return set;
}

SynthSpec command_synth_spec(std::size_t n_per_class, double noise_sigma, std::uint64_t seed, double duration_s,
                             double gain) {
  SynthSpec s;
  s.n_per_class = n_per_class;
  s.noise_sigma = noise_sigma;
  s.seed = seed;
  s.duration_s = duration_s;
  ClassSignature transparency{Command::IncreaseTransparency, {1, 1, gain, 1, 1}};
  ClassSignature luxurious{Command::MoreLuxuriousDecoration, {1, 1, 1, gain, 1}};
  ClassSignature classical{Command::MoreClassicalStyle, {1, gain, 1, 1, 1}};
  s.classes = {transparency, luxurious, classical};
  return s;
}

SynthSpec feature_synth_spec(std::size_t classes, std::size_t n_per_class, double noise_sigma, std::uint64_t seed) {
  if (classes == 0) throw InvalidArgument("synth spec has zero classes");
  SynthSpec s;
  s.n_per_class = n_per_class;
  s.noise_sigma = noise_sigma;
  s.seed = seed;
  Rng rng(derive_seed(seed, 0xfea7));
  std::uniform_int_distribution<int> score(1, 5);
  for (std::size_t c = 0; c < classes; ++c) {
    ClassSignature sig;
    sig.band_gain[c % spectral::kBandCount] = 3.0 + static_cast<double>(c / spectral::kBandCount);
    FeatureLabels fl;
    // Sign pattern follows the bits of c so classes disagree on every feature.
    auto signed_score = [&](int bit) { return ((c >> bit) & 1u ? -1.0 : 1.0) * score(rng); };
    fl.transparency = signed_score(0);
    fl.style = signed_score(1);
    fl.decoration_density = signed_score(2);
    fl.color_scheme = signed_score(3) * ((c & 1u) ? 1.0 : -1.0);
    sig.label = fl;
    s.classes.push_back(sig);
  }
  return s;
}

BlobFixture gaussian_blobs(std::size_t k, std::size_t per_blob, std::size_t dims, double separation, double spread,
                           std::uint64_t seed) {
  if (k == 0 || per_blob == 0 || dims == 0) throw InvalidArgument("blob fixture needs k, per_blob and dims > 0");
  BlobFixture fx;
  fx.centers = Matrix(k, dims, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    if (dims == 2) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(k);
      fx.centers(c, 0) = separation * std::cos(a);
      fx.centers(c, 1) = separation * std::sin(a);
    } else {
      fx.centers(c, c % dims) = separation * (1.0 + static_cast<double>(c / dims));
    }
  }
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  fx.points = Matrix(k * per_blob, dims, 0.0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < per_blob; ++i) {
      const std::size_t r = c * per_blob + i;
      for (std::size_t d = 0; d < dims; ++d) fx.points(r, d) = fx.centers(c, d) + g(rng);
      fx.truth.push_back(c);
    }
  return fx;
}

BlobFixture five_blob_fixture(std::uint64_t seed) { return gaussian_blobs(5, 40, 2, 10.0, 1.0, seed); }

}  // namespace mentalgen::ingest
