#ifndef PEACOCK_CONFIG_HPP
#define PEACOCK_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <string>

#include "peacock/mission.hpp"

namespace peacock {

/// Flat `section.key=value` configuration covering every tunable of the
/// stack. `raw` keeps one canonical string per key (defaults filled in), so
/// serializing and re-parsing is lossless.
struct RunConfig {
  MissionConfig mission;
  std::map<std::string, std::string> raw;
};

RunConfig default_run_config();
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);
void serialize_run_config(const RunConfig& config, std::ostream& out);

}  // namespace peacock

#endif
