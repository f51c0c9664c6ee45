#pragma once

#include <string>
#include <utility>
#include <vector>

#include "damctl/costs.hpp"
#include "damctl/dists.hpp"

namespace damctl {

/// Parses `family:param[,param...]`, e.g. `exp:1.0`, `erlang:3,2.0`,
/// `hyperexp:0.3|0.7;1.0|4.0`, `det:1.0`. Throws ConfigError with the
/// offending field on malformed input.
DistributionSpec parse_dist_spec(const std::string& text);

std::string format_dist_spec(const DistributionSpec& spec);

/// Parses `constant:1.0` | `linear:2.0,1.0` | `table:file.csv,stretch`.
/// Table files hold one positive nonincreasing value per line.
CostModel parse_cost_spec(const std::string& text);

/// Grid syntax `start:stop:step` (inclusive ends) or a comma list.
std::vector<double> parse_value_grid(const std::string& text);

/// key=value lines; '#' starts a comment, blank lines are skipped.
/// Order is preserved; duplicate keys keep the last value.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(const std::string& text);
std::string serialize_key_values(const KeyValues& kv);
KeyValues load_key_values(const std::string& path);

} // namespace damctl
