#include "qnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern char** environ;

namespace qnet {

namespace {

bool identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Strip a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

// Net bracket depth of a line, outside strings; used to join multi-line
// arrays before value parsing.
int bracket_balance(const std::string& line) {
  bool in_string = false;
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, const std::string& origin, int line)
      : text_(text), origin_(origin), line_(line) {}

  ConfigValue parse() {
    ConfigValue v = parse_value();
    skip_space();
    if (pos_ != text_.size()) {
      fail("trailing characters after value");
    }
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  ConfigValue parse_value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    ConfigValue v;
    v.line = line_;
    const char c = text_[pos_];
    if (c == '"') {
      v.kind = ConfigValue::Kind::kString;
      v.text = parse_string();
      return v;
    }
    if (c == '[') {
      v.kind = ConfigValue::Kind::kArray;
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      for (;;) {
        v.array.push_back(parse_value());
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated array");
        if (text_[pos_] == ',') {
          ++pos_;
          skip_space();
          // Tolerate a trailing comma before the closing bracket.
          if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
          }
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        fail("expected ',' or ']' in array");
      }
    }
    // Bare token: boolean or number.
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           text_[end] != ' ' && text_[end] != '\t' && text_[end] != '\n' &&
           text_[end] != '\r') {
      ++end;
    }
    const std::string token = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (token == "true" || token == "false") {
      v.kind = ConfigValue::Kind::kBool;
      v.boolean = token == "true";
      return v;
    }
    errno = 0;
    char* parse_end = nullptr;
    const double num = std::strtod(token.c_str(), &parse_end);
    if (parse_end == token.c_str() + token.size() && !token.empty() &&
        errno != ERANGE && std::isfinite(num)) {
      v.kind = ConfigValue::Kind::kNumber;
      v.number = num;
      v.text = token;
      return v;
    }
    fail("cannot parse value '" + token +
         "' (strings need double quotes; numbers must be finite)");
  }

  std::string parse_string() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    fail("unterminated string");
  }

  const std::string& text_;
  const std::string& origin_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;

  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const int first_line = line_no;
    line = strip_comment(line);
    std::string body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(first_line) +
                          ": section header must close with ']'");
      }
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty() ||
          !std::all_of(section.begin(), section.end(), identifier_char)) {
        throw ConfigError(origin + ":" + std::to_string(first_line) +
                          ": invalid section name '" + section + "'");
      }
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(first_line) +
                        ": expected 'key = value'");
    }
    const std::string key_part = trim(body.substr(0, eq));
    if (key_part.empty() ||
        !std::all_of(key_part.begin(), key_part.end(), identifier_char)) {
      throw ConfigError(origin + ":" + std::to_string(first_line) +
                        ": invalid key '" + key_part + "'");
    }
    std::string value_part = trim(body.substr(eq + 1));

    // Join continuation lines while an array is still open.
    int depth = bracket_balance(value_part);
    while (depth > 0 && std::getline(stream, line)) {
      ++line_no;
      line = strip_comment(line);
      value_part += " " + trim(line);
      depth += bracket_balance(line);
    }
    if (depth != 0) {
      throw ConfigError(origin + ":" + std::to_string(first_line) +
                        ": unbalanced brackets in value of '" + key_part +
                        "'");
    }

    const std::string full_key =
        section.empty() ? key_part : section + "." + key_part;
    if (cfg.values_.count(full_key) > 0) {
      throw ConfigError(origin + ":" + std::to_string(first_line) +
                        ": duplicate key '" + full_key + "'");
    }
    ConfigValue value = ValueParser(value_part, origin, first_line).parse();
    value.origin = ConfigValue::Origin::kFile;
    value.line = first_line;
    cfg.values_[full_key] = std::move(value);
  }
  return cfg;
}

void Config::set_flag(const std::string& key, const std::string& raw_value) {
  ConfigValue value = ValueParser(raw_value, "<flag " + key + ">", 0).parse();
  value.origin = ConfigValue::Origin::kFlag;
  values_[key] = std::move(value);
}

void Config::load_env_overrides(const std::string& prefix) {
  for (char** env = environ; env != nullptr && *env != nullptr; ++env) {
    const std::string entry(*env);
    if (entry.compare(0, prefix.size(), prefix) != 0) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix.size(), eq - prefix.size());
    const std::string raw = entry.substr(eq + 1);
    const std::size_t sep = name.find("__");
    if (sep == std::string::npos || sep == 0 || sep + 2 >= name.size()) {
      continue;
    }
    const std::string key =
        lower(name.substr(0, sep)) + "." + lower(name.substr(sep + 2));
    ConfigValue value;
    try {
      value = ValueParser(raw, "<env " + entry.substr(0, eq) + ">", 0).parse();
    } catch (const ConfigError&) {
      // Unquoted free text is taken as a plain string.
      value.kind = ConfigValue::Kind::kString;
      value.text = raw;
    }
    value.origin = ConfigValue::Origin::kEnv;
    values_[key] = std::move(value);
  }
}

bool Config::has(const std::string& key) const {
  return values_.count(key) > 0;
}

const ConfigValue* Config::find(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

void Config::type_error(const std::string& key, const ConfigValue& v,
                        const std::string& expected) const {
  std::string where = origin_;
  if (v.line > 0) where += ":" + std::to_string(v.line);
  throw ConfigError(where + ": key '" + key + "' expects " + expected);
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kString) type_error(key, *v, "a string");
  return v->text;
}

double Config::get_number(const std::string& key, double fallback) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kNumber) type_error(key, *v, "a number");
  return v->number;
}

long long Config::get_integer(const std::string& key, long long fallback) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kNumber ||
      v->number != std::rint(v->number)) {
    type_error(key, *v, "an integer");
  }
  return static_cast<long long>(v->number);
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kNumber) type_error(key, *v, "an integer");
  errno = 0;
  char* end = nullptr;
  const std::uint64_t seed = std::strtoull(v->text.c_str(), &end, 10);
  if (end != v->text.c_str() + v->text.size() || errno == ERANGE) {
    type_error(key, *v, "an unsigned 64-bit integer");
  }
  return seed;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind != ConfigValue::Kind::kBool) type_error(key, *v, "a boolean");
  return v->boolean;
}

std::vector<double> Config::get_number_array(const std::string& key) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return {};
  if (v->kind != ConfigValue::Kind::kArray) {
    type_error(key, *v, "an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v->array.size());
  for (const ConfigValue& item : v->array) {
    if (item.kind != ConfigValue::Kind::kNumber) {
      type_error(key, *v, "an array of numbers");
    }
    out.push_back(item.number);
  }
  return out;
}

std::vector<std::vector<double>> Config::get_number_rows(
    const std::string& key) {
  const ConfigValue* v = find(key);
  if (v == nullptr) return {};
  if (v->kind != ConfigValue::Kind::kArray) {
    type_error(key, *v, "an array of number arrays");
  }
  std::vector<std::vector<double>> out;
  out.reserve(v->array.size());
  for (const ConfigValue& row : v->array) {
    if (row.kind != ConfigValue::Kind::kArray) {
      type_error(key, *v, "an array of number arrays");
    }
    std::vector<double> r;
    r.reserve(row.array.size());
    for (const ConfigValue& item : row.array) {
      if (item.kind != ConfigValue::Kind::kNumber) {
        type_error(key, *v, "an array of number arrays");
      }
      r.push_back(item.number);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void Config::mark_consumed(const std::string& key) { consumed_.insert(key); }

void Config::reject_unknown() const {
  for (const auto& [key, value] : values_) {
    if (value.origin == ConfigValue::Origin::kEnv) continue;
    if (consumed_.count(key) > 0) continue;
    std::string where = origin_;
    if (value.line > 0) where += ":" + std::to_string(value.line);
    throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace qnet
