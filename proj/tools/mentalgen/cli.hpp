#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace mentalgen::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Options shared by every subcommand.
struct Globals {
  std::uint64_t seed = 0;
  bool json_errors = false;
  std::string command_line;
};

/// {"tool", "version", "command", "seed", "argv"}, stamped into outputs.
nlohmann::json provenance(const Globals& g, const std::string& subcommand);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

void register_data_commands(CLI::App& app, Globals& g);
void register_model_commands(CLI::App& app, Globals& g);
void register_session_commands(CLI::App& app, Globals& g);

}  // namespace mentalgen::cli
