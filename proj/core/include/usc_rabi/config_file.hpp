#pragma once

// Strict reader for the scenario format: a TOML subset with [table] and
// [dotted.table] headers, `key = value` lines, '#' comments. Values are
// numbers, "strings", true/false, or one-line [arrays] of those.

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace usc_rabi {

struct ConfigValue {
  enum class Kind { number, string, boolean, array };

  Kind kind = Kind::number;
  double number = 0.0;
  std::string string;
  bool boolean = false;
  std::vector<ConfigValue> items;
  std::string raw;  ///< value text as written

  std::string kind_name() const;
};

struct ConfigEntry {
  std::string key;  ///< full dotted path, e.g. "system.delta_ghz"
  ConfigValue value;
  int line = 0;
  std::string text;  ///< the source line
};

class ConfigDocument {
 public:
  /// Throws ParseError carrying the line number and text.
  static ConfigDocument parse(std::string_view text);
  static ConfigDocument parse_file(const std::string& path);

  const std::vector<ConfigEntry>& entries() const { return entries_; }
  const std::vector<std::string>& tables() const { return tables_; }
  const ConfigEntry* find(const std::string& key) const;
  bool has_table(const std::string& table) const;
  const std::string& source() const { return source_; }

 private:
  std::vector<ConfigEntry> entries_;
  std::vector<std::string> tables_;
  std::string source_;
};

/// Typed, consumption-tracking view of a document. Every getter marks its
/// key used; finish() rejects whatever was never asked for. Type mismatches
/// and unknown keys are ParseErrors; range checks belong to the caller.
/// Missing required keys read as zero/empty and are reported by finish(),
/// after any unknown key.
class ConfigReader {
 public:
  explicit ConfigReader(const ConfigDocument& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.find(key) != nullptr; }
  bool has_table(const std::string& table) const { return doc_.has_table(table); }

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  bool boolean(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<std::string> strings(const std::string& key,
                                   const std::vector<std::string>& fallback);

  /// Marks a table header as expected (tables with no keys still count).
  void allow_table(const std::string& table) { used_tables_.insert(table); }
  void finish() const;

 private:
  const ConfigEntry& require(const std::string& key, ConfigValue::Kind kind);
  const ConfigEntry* optional(const std::string& key, ConfigValue::Kind kind);

  const ConfigDocument& doc_;
  std::set<std::string> used_;
  std::set<std::string> used_tables_;
  std::vector<std::string> missing_;
  std::vector<std::unique_ptr<ConfigEntry>> placeholders_;
};

/// "line N: `text`" suffix used in error messages.
std::string quote_line(int line, const std::string& text);

}  // namespace usc_rabi
