#include "mentalgen/gateway/backend.hpp"

#include <cstdio>
#include <random>

#include "mentalgen/core/hash.hpp"
#include "mentalgen/core/random.hpp"

namespace mentalgen::gateway {

namespace {

constexpr std::size_t kSide = 64;
constexpr std::size_t kTile = 8;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::array<std::array<std::uint8_t, 3>, 3> palette_for(std::uint64_t hash) {
  std::array<std::array<std::uint8_t, 3>, 3> out{};
  const std::uint64_t a = mix_seed(hash);
  const std::uint64_t b = mix_seed(a);
  for (std::size_t i = 0; i < 9; ++i) {
    const std::uint64_t word = i < 8 ? a : b;
    out[i / 3][i % 3] = static_cast<std::uint8_t>((word >> (8 * (i % 8))) & 0xff);
  }
  return out;
}

}  // namespace

MockParameters mock_parameters(const GenerationRequest& req) {
  std::string key = std::string(to_string(req.command)) + "|" + format_double(req.model_weight) + "|" +
                    std::to_string(req.seed) + "|";
  for (std::size_t i = 0; i < req.prompt_tokens.size(); ++i) {
    if (i) key += ' ';
    key += req.prompt_tokens[i];
  }
  MockParameters p;
  p.hash = fnv1a64(key);
  p.palette = palette_for(p.hash);
  p.density = 0.1 + 0.8 * req.model_weight;
  p.openness = 0.2 + 0.6 * static_cast<double>((p.hash >> 8) % 1000) / 999.0;
  return p;
}

std::string mock_render(const GenerationRequest& req) {
  req.validate();
  const MockParameters p = mock_parameters(req);
  Rng rng(p.hash);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t tiles = kSide / kTile;
  std::string rgb(kSide * kSide * 3, '\0');
  for (std::size_t ty = 0; ty < tiles; ++ty) {
    const bool open_row = unit(rng) < p.openness;
    for (std::size_t tx = 0; tx < tiles; ++tx) {
      const bool filled = !open_row && unit(rng) < p.density;
      const auto& color = p.palette[filled ? 1 + (tx + ty) % 2 : 0];
      for (std::size_t y = ty * kTile; y < (ty + 1) * kTile; ++y)
        for (std::size_t x = tx * kTile; x < (tx + 1) * kTile; ++x)
          for (std::size_t c = 0; c < 3; ++c) rgb[(y * kSide + x) * 3 + c] = static_cast<char>(color[c]);
    }
  }
  char comment[160];
  std::snprintf(comment, sizeof comment, "mentalgen-mock v1 density=%.17g openness=%.17g hash=%016llx", p.density,
                p.openness, static_cast<unsigned long long>(p.hash));
  return encode_ppm(kSide, kSide, rgb, comment);
}

MockParameters parse_mock_header(std::string_view ppm) {
  const auto start = ppm.find("# mentalgen-mock v1 ");
  if (start == std::string_view::npos) throw ParseError("not a mock image", 0);
  const auto end = ppm.find('\n', start);
  const std::string line(ppm.substr(start, end - start));
  double density = 0, openness = 0;
  unsigned long long hash = 0;
  if (std::sscanf(line.c_str(), "# mentalgen-mock v1 density=%lf openness=%lf hash=%llx", &density, &openness,
                  &hash) != 3)
    throw ParseError("malformed mock header", 0);
  MockParameters p;
  p.density = density;
  p.openness = openness;
  p.hash = hash;
  p.palette = palette_for(p.hash);
  return p;
}

GenerationResult mock_generate(const GenerationRequest& req, const ArtifactStore& store) {
  GenerationResult r;
  r.request_id = req.request_id;
  r.image = store.put_image(mock_render(req));
  r.status = GenerationStatus::ok;
  r.latency_ms = 0.0;
  return r;
}

std::vector<GenerationResult> MockBackend::generate(std::span<const GenerationRequest> batch) {
  std::vector<GenerationResult> out;
  out.reserve(batch.size());
  for (const auto& req : batch) out.push_back(mock_generate(req, store_));
  return out;
}

}  // namespace mentalgen::gateway
