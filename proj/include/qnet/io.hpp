#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnet/errors.hpp"

namespace qnet {

// The one numeric serialization used by every artifact: shortest general
// form at 15 significant digits, so outputs are byte-stable run to run.
std::string format_double(double v);

void ensure_directory(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// One CSV row from pre-rendered cells.
std::string csv_row(const std::vector<std::string>& cells);

// Minimal streaming JSON writer: insertion-ordered objects, two-space
// indentation, numbers rendered through format_double.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& number(double v);
  JsonWriter& integer(long long v);
  JsonWriter& unsigned_integer(std::uint64_t v);
  JsonWriter& boolean(bool v);
  JsonWriter& string(const std::string& v);
  std::string take();

 private:
  void before_value();
  void indent();
  void string_payload(const std::string& v);

  struct Level {
    bool is_object = false;
    int count = 0;
  };
  std::string out_;
  std::vector<Level> stack_;
  bool pending_key_ = false;
};

}  // namespace qnet
