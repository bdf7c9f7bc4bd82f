#include "usc_rabi/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "usc_rabi/errors.hpp"

namespace usc_rabi {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

bool valid_path(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = s.find('.', start);
    if (!valid_name(s.substr(start, dot == std::string_view::npos ? dot : dot - start))) {
      return false;
    }
    if (dot == std::string_view::npos) return true;
    start = dot + 1;
  }
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line, const std::string& src)
      : s_(text), line_(line), src_(src) {}

  ConfigValue parse_top() {
    ConfigValue v = parse_value(true);
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected text after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at " + quote_line(line_, src_), line_, src_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ConfigValue parse_value(bool allow_array) {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const std::size_t start = pos_;
    ConfigValue v;
    const char c = s_[pos_];
    if (c == '"') {
      v.kind = ConfigValue::Kind::string;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\') fail("escape sequences are not supported in strings");
        v.string += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
    } else if (c == '[') {
      if (!allow_array) fail("nested arrays are not supported");
      v.kind = ConfigValue::Kind::array;
      ++pos_;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
      } else {
        for (;;) {
          v.items.push_back(parse_value(false));
          skip_ws();
          if (pos_ >= s_.size()) fail("unterminated array");
          if (s_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (s_[pos_] == ']') {
            ++pos_;
            break;
          }
          fail("expected ',' or ']' in array");
        }
      }
    } else {
      std::size_t end = pos_;
      while (end < s_.size() && s_[end] != ',' && s_[end] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[end]))) {
        ++end;
      }
      const std::string_view tok = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (tok == "true" || tok == "false") {
        v.kind = ConfigValue::Kind::boolean;
        v.boolean = tok == "true";
      } else {
        v.kind = ConfigValue::Kind::number;
        std::string_view num = tok;
        if (!num.empty() && num.front() == '+') num.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v.number);
        if (ec != std::errc{} || ptr != num.data() + num.size() || num.empty() ||
            !std::isfinite(v.number)) {
          fail("invalid value '" + std::string(tok) + "'");
        }
      }
    }
    v.raw = std::string(trim(s_.substr(start, pos_ - start)));
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  const std::string& src_;
};

const char* kind_label(ConfigValue::Kind k) {
  switch (k) {
    case ConfigValue::Kind::number:
      return "number";
    case ConfigValue::Kind::string:
      return "string";
    case ConfigValue::Kind::boolean:
      return "boolean";
    case ConfigValue::Kind::array:
      return "array";
  }
  return "?";
}

}  // namespace

std::string ConfigValue::kind_name() const { return kind_label(kind); }

std::string quote_line(int line, const std::string& text) {
  return "line " + std::to_string(line) + ": `" + text + "`";
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  doc.source_ = std::string(text);
  std::string table;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string src(raw);
    const std::string_view body = trim(strip_comment(raw));
    if (body.empty()) continue;

    auto fail = [&](const std::string& what) {
      throw ParseError(what + " at " + quote_line(line_no, src), line_no, src);
    };

    if (body.front() == '[') {
      if (body.back() != ']') fail("malformed table header");
      const std::string_view name = trim(body.substr(1, body.size() - 2));
      if (!valid_path(name)) fail("invalid table name");
      table = std::string(name);
      if (std::find(doc.tables_.begin(), doc.tables_.end(), table) != doc.tables_.end()) {
        fail("duplicate table [" + table + "]");
      }
      doc.tables_.push_back(table);
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) fail("expected `key = value`");
    const std::string_view key = trim(body.substr(0, eq));
    if (!valid_name(key)) fail("invalid key '" + std::string(key) + "'");
    ConfigEntry e;
    e.key = table.empty() ? std::string(key) : table + "." + std::string(key);
    e.line = line_no;
    e.text = src;
    e.value = ValueParser(body.substr(eq + 1), line_no, src).parse_top();
    if (doc.find(e.key) != nullptr) fail("duplicate key '" + e.key + "'");
    doc.entries_.push_back(std::move(e));
  }
  return doc;
}

ConfigDocument ConfigDocument::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigEntry* ConfigDocument::find(const std::string& key) const {
  for (const ConfigEntry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool ConfigDocument::has_table(const std::string& table) const {
  return std::find(tables_.begin(), tables_.end(), table) != tables_.end();
}

const ConfigEntry* ConfigReader::optional(const std::string& key, ConfigValue::Kind kind) {
  const ConfigEntry* e = doc_.find(key);
  if (e == nullptr) return nullptr;
  used_.insert(key);
  if (e->value.kind != kind) {
    throw ParseError("key '" + key + "' must be a " + kind_label(kind) + ", got " +
                         e->value.kind_name() + " at " + quote_line(e->line, e->text),
                     e->line, e->text);
  }
  return e;
}

const ConfigEntry& ConfigReader::require(const std::string& key, ConfigValue::Kind kind) {
  const ConfigEntry* e = optional(key, kind);
  if (e != nullptr) return *e;
  // Reported by finish(), after unknown keys: a misspelt key is usually the cause.
  missing_.push_back(key);
  placeholders_.push_back(std::make_unique<ConfigEntry>());
  placeholders_.back()->key = key;
  placeholders_.back()->value.kind = kind;
  return *placeholders_.back();
}

double ConfigReader::number(const std::string& key) {
  return require(key, ConfigValue::Kind::number).value.number;
}

double ConfigReader::number(const std::string& key, double fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::number);
  return e ? e->value.number : fallback;
}

namespace {
int as_integer(const ConfigEntry& e) {
  const double v = e.value.number;
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ParseError("key '" + e.key + "' must be an integer at " + quote_line(e.line, e.text),
                     e.line, e.text);
  }
  return static_cast<int>(v);
}
}  // namespace

int ConfigReader::integer(const std::string& key) {
  return as_integer(require(key, ConfigValue::Kind::number));
}

int ConfigReader::integer(const std::string& key, int fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::number);
  return e ? as_integer(*e) : fallback;
}

std::string ConfigReader::string(const std::string& key) {
  return require(key, ConfigValue::Kind::string).value.string;
}

std::string ConfigReader::string(const std::string& key, const std::string& fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::string);
  return e ? e->value.string : fallback;
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::boolean);
  return e ? e->value.boolean : fallback;
}

namespace {
template <typename T, typename Get>
std::vector<T> array_of(const ConfigEntry& e, ConfigValue::Kind kind, Get get) {
  std::vector<T> out;
  for (const ConfigValue& v : e.value.items) {
    if (v.kind != kind) {
      throw ParseError("key '" + e.key + "' must be an array of " + kind_label(kind) +
                           "s at " + quote_line(e.line, e.text),
                       e.line, e.text);
    }
    out.push_back(get(v));
  }
  return out;
}
}  // namespace

std::vector<double> ConfigReader::numbers(const std::string& key) {
  return array_of<double>(require(key, ConfigValue::Kind::array), ConfigValue::Kind::number,
                          [](const ConfigValue& v) { return v.number; });
}

std::vector<double> ConfigReader::numbers(const std::string& key,
                                          const std::vector<double>& fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::array);
  if (!e) return fallback;
  return array_of<double>(*e, ConfigValue::Kind::number,
                          [](const ConfigValue& v) { return v.number; });
}

std::vector<std::string> ConfigReader::strings(const std::string& key,
                                               const std::vector<std::string>& fallback) {
  const ConfigEntry* e = optional(key, ConfigValue::Kind::array);
  if (!e) return fallback;
  return array_of<std::string>(*e, ConfigValue::Kind::string,
                               [](const ConfigValue& v) { return v.string; });
}

void ConfigReader::finish() const {
  for (const ConfigEntry& e : doc_.entries()) {
    if (used_.count(e.key) == 0) {
      throw ParseError("unknown key '" + e.key + "' at " + quote_line(e.line, e.text), e.line,
                       e.text);
    }
  }
  for (const std::string& t : doc_.tables()) {
    bool used = used_tables_.count(t) > 0;
    for (const std::string& k : used_) {
      if (k.rfind(t + ".", 0) == 0) used = true;
    }
    if (!used) throw ParseError("unknown table [" + t + "]");
  }
  if (!missing_.empty()) throw ParseError("missing required key '" + missing_.front() + "'");
}

}  // namespace usc_rabi
