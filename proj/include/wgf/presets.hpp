#pragma once

#include <string>
#include <vector>

#include "wgf/config.hpp"

namespace wgf {

/// Fully resolved configurations for the stock experiments. Throws
/// ConfigError for unknown names. "verify-metric-mm" is handled by the CLI
/// directly and has no RunConfig.
RunConfig preset(const std::string& name);

const std::vector<std::string>& preset_names();

}  // namespace wgf
