#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace singlab::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kSchema = 2, kInconclusive = 3 };

/// Runs a resolved configuration and writes its files into `out_dir`.
/// Nothing is written unless the computation finished.
int run_command(const Json& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace singlab::cli
