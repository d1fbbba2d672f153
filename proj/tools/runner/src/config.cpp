#include "weylspec/runner/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "weylspec/error.hpp"

namespace weylspec::runner {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string field_name(std::string_view section, std::string_view key) {
  return fmt::format("{}.{}", section, key);
}

double parse_plain(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError(std::string(field), fmt::format("'{}' is not a number", t));
  }
  return value;
}

}  // namespace

double parse_number(std::string_view text, std::string_view field) {
  const auto slash = text.find('/');
  double value = 0.0;
  if (slash == std::string_view::npos) {
    value = parse_plain(text, field);
  } else {
    const double num = parse_plain(text.substr(0, slash), field);
    const double den = parse_plain(text.substr(slash + 1), field);
    if (den == 0.0) throw ConfigError(std::string(field), "zero denominator");
    value = num / den;
  }
  if (!std::isfinite(value)) throw ConfigError(std::string(field), "value is not finite");
  return value;
}

Config Config::parse(std::string text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config", fmt::format("line {}: {}", e.line(), e.message()));
  }
  Config cfg;
  cfg.text_ = std::move(text);
  for (const auto& [name, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError(name, "keys must live inside a [section]");
    }
    auto& section = cfg.sections_[name];
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError(field_name(name, key), "nested sections are not supported");
      section[key] = trim(leaf.data());
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(std::string_view section, std::string_view key) const { return get(section, key).has_value(); }

std::optional<std::string> Config::get(std::string_view section, std::string_view key) const {
  const auto s = sections_.find(std::string(section));
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(std::string(key));
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string Config::get_or(std::string_view section, std::string_view key, std::string fallback) const {
  auto v = get(section, key);
  return v ? *v : std::move(fallback);
}

double Config::number(std::string_view section, std::string_view key, double fallback) const {
  const auto v = get(section, key);
  return v ? parse_number(*v, field_name(section, key)) : fallback;
}

long long Config::integer(std::string_view section, std::string_view key, long long fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (v->empty() || ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ConfigError(field_name(section, key), fmt::format("'{}' is not an integer", *v));
  }
  return out;
}

std::vector<double> Config::numbers(std::string_view section, std::string_view key) const {
  std::vector<double> out;
  const auto v = get(section, key);
  if (!v) return out;
  std::string_view rest = *v;
  const std::string field = field_name(section, key);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(rest.substr(0, comma), field));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::pair<int, int> Config::grid(std::string_view section, std::string_view key, std::pair<int, int> fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  const std::string field = field_name(section, key);
  auto as_int = [&](std::string_view t) {
    const std::string s = trim(t);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || out < 1) {
      throw ConfigError(field, fmt::format("'{}' is not a grid size (N or NxM, N >= 1)", *v));
    }
    return out;
  };
  const auto x = v->find('x');
  if (x == std::string::npos) {
    const int n = as_int(*v);
    return {n, n};
  }
  return {as_int(std::string_view(*v).substr(0, x)), as_int(std::string_view(*v).substr(x + 1))};
}

void Config::require_known(const std::map<std::string, std::vector<std::string>>& allowed) const {
  for (const auto& [name, section] : sections_) {
    const auto a = allowed.find(name);
    if (a == allowed.end()) throw ConfigError(name, "unknown section");
    const auto& keys = a->second;
    if (std::find(keys.begin(), keys.end(), "*") != keys.end()) continue;
    for (const auto& [key, value] : section) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError(field_name(name, key), "unknown key");
      }
    }
  }
}

}  // namespace weylspec::runner
