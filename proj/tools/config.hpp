#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Bad or unknown configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyMap = std::map<std::string, std::string>;

// Per-subcommand schema: key -> default value (as text).
struct Schema {
  std::string name;
  KeyMap defaults;
};

// Keys every subcommand accepts.
KeyMap common_defaults();

// key = value lines with optional [section] headers, '#' comments. Keys before
// any header or under [common] apply to every subcommand. A .json file is read
// as a run manifest and its "config" object is used. Unknown sections and
// keys are rejected by name.
KeyMap load_config_file(const std::string& path, const std::string& subcommand,
                        const std::vector<Schema>& schemas);

// Resolved view over defaults <- file <- flags.
class Config {
 public:
  Config(KeyMap values) : values_(std::move(values)) {}

  const KeyMap& values() const noexcept { return values_; }
  std::string str(const std::string& key) const;
  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  // comma-separated; integer items may be ranges lo..hi
  std::vector<long> integers(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> items(const std::string& key) const;

 private:
  KeyMap values_;
};

}  // namespace cli
