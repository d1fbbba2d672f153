#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weylspec::runner {

/// Flat INI document: `[section]` headers and `key = value` lines, `;` comments.
/// Keeps the original text so a report can embed it verbatim.
class Config {
 public:
  using Section = std::map<std::string, std::string>;

  static Config parse(std::string text);
  static Config load(const std::filesystem::path& path);

  const std::string& text() const { return text_; }
  const std::map<std::string, Section>& sections() const { return sections_; }

  bool has(std::string_view section, std::string_view key) const;
  std::optional<std::string> get(std::string_view section, std::string_view key) const;
  std::string get_or(std::string_view section, std::string_view key, std::string fallback) const;

  /// Real number; accepts decimals and exact ratios such as `1/32`.
  double number(std::string_view section, std::string_view key, double fallback) const;
  long long integer(std::string_view section, std::string_view key, long long fallback) const;
  /// Comma-separated list of numbers; empty when the key is absent.
  std::vector<double> numbers(std::string_view section, std::string_view key) const;
  /// `N` or `NxM`.
  std::pair<int, int> grid(std::string_view section, std::string_view key, std::pair<int, int> fallback) const;

  /// Throws ConfigError naming the first key not listed in `allowed`
  /// (section name -> keys; a `*` key admits any key in that section).
  void require_known(const std::map<std::string, std::vector<std::string>>& allowed) const;

 private:
  std::string text_;
  std::map<std::string, Section> sections_;
};

/// Parses "a/b", decimals and exponent forms. `field` names the key in errors.
double parse_number(std::string_view text, std::string_view field);

}  // namespace weylspec::runner
