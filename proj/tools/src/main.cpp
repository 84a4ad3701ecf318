#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"

namespace {

using singlab::cli::Json;
using singlab::cli::SchemaError;

Json read_config_file(const std::string& path) {
  if (path.empty()) return Json();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("--config", "cannot read '" + path + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw SchemaError("--config", "'" + path + "' is not valid JSON");
  return j;
}

std::filesystem::path output_dir(const Json& config) {
  const std::string configured = config.at("out_dir").get<std::string>();
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("SINGLAB_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

bool is_configuration_error(singlab::ErrorCode code) {
  using singlab::ErrorCode;
  return code == ErrorCode::ContractViolation || code == ErrorCode::DomainError ||
         code == ErrorCode::NotPerfectFit || code == ErrorCode::UnsupportedFeature ||
         code == ErrorCode::Unsupported || code == ErrorCode::DegenerateSegment;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singlab: singularities of data maps, computed"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  long threads = -1;

  for (const auto& name : singlab::cli::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-s,--set", overrides, "override a config value, e.g. --set map.kind=LS_LINE")
        ->allow_extra_args(false);
    sub->add_option("-o,--out-dir", out_dir, "output directory (default: $SINGLAB_OUT_DIR or .)");
    sub->add_option("-t,--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : singlab::cli::kSchema;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (!out_dir.empty()) overrides.push_back("out_dir=" + Json(out_dir).dump());
    if (threads >= 0) overrides.push_back("threads=" + std::to_string(threads));
    const Json config = singlab::cli::resolve_config(command, read_config_file(config_path), overrides);
    singlab::set_thread_count(config.at("threads").get<std::size_t>());
    return singlab::cli::run_command(config, output_dir(config), std::cerr);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return singlab::cli::kSchema;
  } catch (const singlab::Error& e) {
    if (is_configuration_error(e.code())) {
      std::cerr << "invalid configuration: " << e.what() << '\n';
      return singlab::cli::kSchema;
    }
    std::cerr << "error: " << e.what() << '\n';
    return singlab::cli::kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return singlab::cli::kInternal;
  }
}
