#include <cstring>
#include <fstream>
#include <iostream>

#include "cli.hpp"
#include "mentalgen/core/error.hpp"

namespace mentalgen::cli {

nlohmann::json provenance(const Globals& g, const std::string& subcommand) {
  return {{"tool", "mentalgen"},
          {"version", kVersion},
          {"command", subcommand},
          {"seed", g.seed},
          {"argv", g.command_line}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("file " + path.string() + " not found");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace mentalgen::cli

namespace {

using mentalgen::cli::Globals;

int report_error(const Globals& g, std::string_view code, const std::string& message, const std::string& field,
                 std::size_t line, int exit_code) {
  if (g.json_errors) {
    nlohmann::json e = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
    if (!field.empty()) e["field"] = field;
    if (line) e["line"] = line;
    std::cerr << nlohmann::json{{"error", e}}.dump() << std::endl;
  } else {
    std::cerr << "mentalgen: " << message << std::endl;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i) {
    if (i) g.command_line += ' ';
    g.command_line += argv[i];
    if (std::strcmp(argv[i], "--json") == 0) g.json_errors = true;
  }

  CLI::App app{"mentalgen: EEG intent decoding and iterative design generation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", mentalgen::cli::kVersion);
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--json", g.json_errors, "Print errors as JSON on stderr");
  mentalgen::cli::register_data_commands(app, g);
  mentalgen::cli::register_model_commands(app, g);
  mentalgen::cli::register_session_commands(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(g, "usage", e.what(), {}, 0, 2);
  } catch (const mentalgen::FieldError& e) {
    return report_error(g, "invalid_field", e.what(), e.field(), 0, 1);
  } catch (const mentalgen::ParseError& e) {
    return report_error(g, "malformed", e.what(), {}, e.line(), 1);
  } catch (const mentalgen::NotFoundError& e) {
    return report_error(g, "not_found", e.what(), {}, 0, 1);
  } catch (const mentalgen::InvalidArgument& e) {
    return report_error(g, "invalid_argument", e.what(), {}, 0, 1);
  } catch (const mentalgen::StateError& e) {
    return report_error(g, "conflict", e.what(), {}, 0, 1);
  } catch (const std::exception& e) {
    return report_error(g, "internal", e.what(), {}, 0, 1);
  }
  return 0;
}
