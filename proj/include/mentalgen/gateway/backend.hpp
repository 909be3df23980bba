#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "mentalgen/gateway/artifact_store.hpp"

namespace mentalgen::gateway {

/// A generation backend. `generate` handles one round's batch; results are
/// returned in request order and every result carries a resolvable image
/// (a placeholder when generation failed).
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual std::vector<GenerationResult> generate(std::span<const GenerationRequest> batch) = 0;
};

/// Neutral grey 64x64 image stored in `store`.
ImageRef placeholder_image(const ArtifactStore& store);

/// Parameters of the mock's procedural image.
///
///   h       = FNV-1a over "cmd|weight|seed|tok1 tok2 ..." (weight in %.17g)
///   palette = three RGB colors from successive bytes of mix(h)
///   density = 0.1 + 0.8 * model_weight           (tile fill probability)
///   openness = 0.2 + 0.6 * ((h >> 8) % 1000) / 999 (fraction of empty rows)
///
/// density depends on the weight alone, so it increases monotonically with
/// model_weight.
struct MockParameters {
  std::array<std::array<std::uint8_t, 3>, 3> palette{};
  double density = 0.0;
  double openness = 0.0;
  std::uint64_t hash = 0;

  friend bool operator==(const MockParameters&, const MockParameters&) = default;
};

MockParameters mock_parameters(const GenerationRequest& req);

/// 64x64 PPM. The header carries one comment line
/// "# mentalgen-mock v1 density=<%.17g> openness=<%.17g> hash=<hex>".
std::string mock_render(const GenerationRequest& req);

/// Reads the parameters back from a mock image's header comment.
MockParameters parse_mock_header(std::string_view ppm);

/// Stores mock_render output. Total for a valid request; latency_ms is 0.
GenerationResult mock_generate(const GenerationRequest& req, const ArtifactStore& store);

class MockBackend final : public Backend {
 public:
  explicit MockBackend(ArtifactStore store) : store_(std::move(store)) {}
  std::string_view name() const noexcept override { return "mock"; }
  std::vector<GenerationResult> generate(std::span<const GenerationRequest> batch) override;

 private:
  ArtifactStore store_;
};

}  // namespace mentalgen::gateway
