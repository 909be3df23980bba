#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mentalgen/gateway/types.hpp"

namespace mentalgen::gateway {

/// Artifacts directory layout:
///
///   <root>/images/<sha256 of bytes>.<ext>
///   <root>/sessions/<session_id>.jsonl
///   <root>/models/...
///
/// Images are immutable: writing the same bytes twice yields the same ref.
class ArtifactStore {
 public:
  explicit ArtifactStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Stores bytes under their digest. The extension comes from the magic
  /// number: ppm, png, jpg, or bin.
  ImageRef put_image(std::string_view bytes) const;
  /// True when the ref names an existing file whose digest matches its name.
  bool resolvable(const ImageRef& ref) const;
  std::string read(const ImageRef& ref) const;
  std::filesystem::path absolute(const ImageRef& ref) const;

 private:
  std::filesystem::path root_;
};

/// Lowercase extension for the image format detected from `bytes`.
std::string_view image_extension(std::string_view bytes) noexcept;

/// Binary PPM (P6). `comment` lines are written after the magic number.
std::string encode_ppm(std::size_t width, std::size_t height, std::string_view rgb, std::string_view comment = {});

}  // namespace mentalgen::gateway
