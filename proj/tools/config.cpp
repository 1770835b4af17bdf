#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const Schema* find_schema(const std::vector<Schema>& schemas, const std::string& name) {
  for (const auto& s : schemas)
    if (s.name == name) return &s;
  return nullptr;
}

void check_key(const std::string& key, const Schema* schema, const std::string& where) {
  const KeyMap common = common_defaults();
  if (common.count(key)) return;
  if (schema && schema->defaults.count(key)) return;
  throw ConfigError("unknown config key '" + key + "' in " + where);
}

}  // namespace

KeyMap common_defaults() {
  return {{"seed", "20261015"}, {"stream", "0"}, {"threads", "0"}, {"output", ""}};
}

KeyMap load_config_file(const std::string& path, const std::string& subcommand,
                        const std::vector<Schema>& schemas) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const Schema* own = find_schema(schemas, subcommand);
  KeyMap out;

  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError("malformed manifest '" + path + "': " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object())
      throw ConfigError("manifest '" + path + "' has no config object");
    if (j.contains("subcommand") && j["subcommand"] != subcommand)
      throw ConfigError("manifest '" + path + "' belongs to " + j["subcommand"].get<std::string>());
    for (const auto& [k, v] : j["config"].items()) {
      check_key(k, own, path);
      out[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return out;
  }

  std::string line, section = "common";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header at " + where);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "common" && !find_schema(schemas, section))
        throw ConfigError("unknown config section '" + section + "' at " + where);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at " + where);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key at " + where);
    const Schema* schema = section == "common" ? own : find_schema(schemas, section);
    check_key(key, schema, where);
    if (section == "common" || section == subcommand) out[key] = value;
  }
  return out;
}

std::string Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

long Config::integer(const std::string& key) const {
  const std::string s = str(key);
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' expects an integer, got '" + s + "'");
}

double Config::real(const std::string& key) const {
  const std::string s = str(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' expects a number, got '" + s + "'");
}

bool Config::flag(const std::string& key) const {
  std::string s = str(key);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config key '" + key + "' expects true/false, got '" + s + "'");
}

std::vector<std::string> Config::items(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<long> Config::integers(const std::string& key) const {
  std::vector<long> out;
  for (const auto& item : items(key)) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        std::size_t pos = 0;
        out.push_back(std::stol(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } else {
        const long lo = std::stol(item.substr(0, dots));
        const long hi = std::stol(item.substr(dots + 2));
        for (long v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has a bad integer item '" + item + "'");
    }
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : items(key)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has a bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace cli
