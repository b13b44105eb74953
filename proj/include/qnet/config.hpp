#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qnet/errors.hpp"

namespace qnet {

// One parsed configuration value.  Numbers keep their raw spelling so
// integer-valued keys (seeds in particular) survive without rounding.
struct ConfigValue {
  enum class Kind { kString, kBool, kNumber, kArray };
  enum class Origin { kFile, kEnv, kFlag };

  Kind kind = Kind::kString;
  Origin origin = Origin::kFile;
  std::string text;   // string payload, or the raw numeric token
  bool boolean = false;
  double number = 0.0;
  std::vector<ConfigValue> array;
  int line = 0;  // 1-based line in the source file; 0 for overrides
};

// Key/value tree in a TOML subset: `[section]` headers, `key = value` pairs,
// strings, booleans, numbers, (nested) single- or multi-line arrays, and `#`
// comments.  Keys are addressed as "section.key".  Reads are tracked so a
// run can reject keys its schema never consumed.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text,
                            const std::string& origin = "<string>");

  // Replace or insert a key from a command-line flag ("run.seed" etc.).
  void set_flag(const std::string& key, const std::string& raw_value);

  // Apply QNET_SECTION__KEY environment overrides (double underscore maps
  // to the section/key separator; names are lowercased).
  void load_env_overrides(const std::string& prefix = "QNET_");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  double get_number(const std::string& key, double fallback);
  long long get_integer(const std::string& key, long long fallback);
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_number_array(const std::string& key);
  std::vector<std::vector<double>> get_number_rows(const std::string& key);

  // Accept a key without using its value (e.g. keys consumed elsewhere).
  void mark_consumed(const std::string& key);

  // Throws ConfigError naming the first file- or flag-origin key that no
  // getter consumed.  Environment overrides of keys a given run never reads
  // are ignored rather than rejected.
  void reject_unknown() const;

  const std::string& origin() const { return origin_; }

 private:
  const ConfigValue* find(const std::string& key);
  [[noreturn]] void type_error(const std::string& key, const ConfigValue& v,
                               const std::string& expected) const;

  std::string origin_;
  std::map<std::string, ConfigValue> values_;
  std::set<std::string> consumed_;
};

}  // namespace qnet
