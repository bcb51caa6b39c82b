#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "drumhead/experiment.hpp"

namespace drumhead {

/// Everything a CLI invocation can configure.
///
/// File format: one `section.key = value` per line, `#` starts a comment, blank lines
/// are ignored. Unknown keys are errors. `write_config` emits every key in a fixed
/// order, so parse(write(c)) == c and writing again reproduces the same bytes.
struct CliConfig {
  ExperimentConfig experiment;  // owns map, descent (incl. metric), pair and worker settings
  std::string output_dir = "out";
};

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "DRUMHEAD_CONFIG";

/// Applies one `key = value` assignment; throws std::invalid_argument on unknown keys or bad values.
void set_config_value(CliConfig& cfg, std::string_view key, std::string_view value);

/// Reads assignments from a stream on top of `cfg`.
void read_config(std::istream& is, CliConfig& cfg);
CliConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& os, const CliConfig& cfg);
std::string config_to_string(const CliConfig& cfg);

/// All keys in canonical order.
std::vector<std::string> config_keys();

}  // namespace drumhead
