#pragma once

// Experiment configuration: per-command defaults, merging of a JSON config
// file with `--set path=value` overrides, and schema checks that name the
// offending key.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace singlab::cli {

using Json = nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string key, const std::string& message)
      : std::runtime_error("key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

const std::vector<std::string>& command_names();

/// Fully populated default configuration for a command.
Json default_config(const std::string& command);

/// Parse one `path=value` override. The value is read as JSON when possible
/// and as a plain string otherwise.
void apply_override(Json& overlay, const std::string& assignment);

/// Defaults, then the file, then the overrides; type and range checked.
Json resolve_config(const std::string& command, const Json& file_config, const std::vector<std::string>& overrides);

/// Lookup by dotted path on an already resolved config.
const Json& at_path(const Json& config, const std::string& path);

}  // namespace singlab::cli
