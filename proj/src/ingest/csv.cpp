#include "mentalgen/ingest/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mentalgen/core/hash.hpp"

namespace mentalgen::ingest {

namespace {

constexpr std::string_view kMagic = "# mentalgen-eeg v1";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
  if (!std::isfinite(v)) throw NonFiniteError("line " + std::to_string(line) + ": non-finite value '" + std::string(cell) + "'");
  return v;
}

}  // namespace

std::string format_recording(const EegRecording& rec) {
  rec.validate();
  std::string out;
  out.reserve(rec.channels() * rec.samples() * 14 + 256);
  out += kMagic;
  out += '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "sample_rate,%.17g\n", rec.sample_rate);
  out += buf;
  out += "channels";
  const auto names = rec.channel_names.empty() ? default_channel_names(rec.channels()) : rec.channel_names;
  for (const auto& n : names) {
    out += ',';
    out += n;
  }
  out += '\n';
  for (std::size_t s = 0; s < rec.samples(); ++s) {
    for (std::size_t c = 0; c < rec.channels(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.9g", rec.data(c, s));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

EegRecording parse_recording(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }

  std::size_t i = 0;
  if (lines.empty() || trim(lines[0]) != kMagic) throw ParseError("missing '# mentalgen-eeg v1' header", 1);
  ++i;
  auto next_header = [&]() -> std::vector<std::string_view> {
    while (i < lines.size() && (trim(lines[i]).empty() || trim(lines[i]).front() == '#')) ++i;
    if (i >= lines.size()) return {};
    return split(trim(lines[i++]));
  };

  EegRecording rec;
  const auto sr = next_header();
  if (sr.size() != 2 || trim(sr[0]) != "sample_rate") throw ParseError("missing sample_rate header", i);
  rec.sample_rate = parse_cell(sr[1], i);
  if (!(rec.sample_rate > 0.0)) throw ParseError("sample_rate must be positive", i);

  const auto ch = next_header();
  if (ch.size() < 2 || trim(ch[0]) != "channels") throw ParseError("missing channels header", i);
  for (std::size_t k = 1; k < ch.size(); ++k) rec.channel_names.emplace_back(trim(ch[k]));
  const std::size_t nch = rec.channel_names.size();

  std::vector<std::vector<double>> columns(nch);
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (cells.size() != nch)
      throw ParseError("expected " + std::to_string(nch) + " columns, found " + std::to_string(cells.size()), i + 1);
    for (std::size_t c = 0; c < nch; ++c) columns[c].push_back(parse_cell(cells[c], i + 1));
  }
  if (columns.empty() || columns[0].empty()) throw ParseError("no samples", 0);

  rec.data = Matrix(nch, columns[0].size());
  for (std::size_t c = 0; c < nch; ++c) std::copy(columns[c].begin(), columns[c].end(), rec.data.row(c).begin());
  return rec;
}

void save_recording(const EegRecording& rec, const std::filesystem::path& path) {
  const std::string text = format_recording(rec);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  }
  std::ofstream sidecar(path.string() + ".sha256");
  sidecar << sha256_hex(text) << '\n';
}

EegRecording load_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const std::filesystem::path sidecar = path.string() + ".sha256";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream sin(sidecar);
    std::string expected;
    sin >> expected;
    if (expected != sha256_hex(text)) throw ParseError(path.string() + ": content hash does not match sidecar", 0);
  }
  return parse_recording(text);
}

}  // namespace mentalgen::ingest
