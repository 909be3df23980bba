#include "mentalgen/gateway/artifact_store.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "mentalgen/core/error.hpp"
#include "mentalgen/core/hash.hpp"

namespace mentalgen::gateway {

namespace fs = std::filesystem;

ArtifactStore::ArtifactStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "images"); }

std::string_view image_extension(std::string_view b) noexcept {
  if (b.starts_with("P6")) return "ppm";
  if (b.starts_with("\x89PNG")) return "png";
  if (b.starts_with("\xFF\xD8\xFF")) return "jpg";
  return "bin";
}

ImageRef ArtifactStore::put_image(std::string_view bytes) const {
  const std::string digest = sha256_hex(bytes);
  ImageRef ref{"images/" + digest + "." + std::string(image_extension(bytes))};
  const fs::path target = absolute(ref);
  if (fs::exists(target)) return ref;
  // Write to a unique temp name, then rename, so readers never see a partial file.
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid()) + "_" +
                       std::to_string(std::hash<std::string_view>{}(bytes) ^ reinterpret_cast<std::uintptr_t>(&tmp));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
  return ref;
}

fs::path ArtifactStore::absolute(const ImageRef& ref) const {
  const fs::path rel(ref.path);
  if (ref.empty() || rel.is_absolute() || ref.path.find("..") != std::string::npos)
    throw InvalidArgument("invalid image ref '" + ref.path + "'");
  return root_ / rel;
}

bool ArtifactStore::resolvable(const ImageRef& ref) const {
  try {
    const fs::path p = absolute(ref);
    if (!fs::is_regular_file(p)) return false;
    return p.stem().string() == sha256_hex(read(ref));
  } catch (const Error&) {
    return false;
  }
}

std::string ArtifactStore::read(const ImageRef& ref) const {
  std::ifstream in(absolute(ref), std::ios::binary);
  if (!in) throw NotFoundError("image " + ref.path + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string encode_ppm(std::size_t width, std::size_t height, std::string_view rgb, std::string_view comment) {
  if (rgb.size() != width * height * 3) throw InvalidArgument("pixel buffer size does not match dimensions");
  std::string out = "P6\n";
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  out += std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out += rgb;
  return out;
}

}  // namespace mentalgen::gateway
