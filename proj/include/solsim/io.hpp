#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace solsim {

using Json = nlohmann::ordered_json;

// Shortest-unambiguous decimal rendering (%.17g); identical inputs give
// byte-identical files.
std::string format_double(double v);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);
std::string fnv1a64_hex(const std::string& s);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// CSV with RFC-4180-style quoting, preceded by '#' metadata lines.
class CsvBuilder {
 public:
  void metadata(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  const std::string& str() const { return body_; }

 private:
  std::string body_;
  bool header_written_ = false;
  void emit_line(const std::vector<std::string>& cells);
};

}  // namespace solsim
