#include "solsim/io.hpp"

#include <cstdio>
#include <fstream>

#include "solsim/errors.hpp"

namespace solsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

std::string fnv1a64_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw ConfigError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open: " + path.string());
  std::string content((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
  return content;
}

void CsvBuilder::metadata(const std::string& key, const std::string& value) {
  body_ += "# " + key + ": " + value + "\n";
}

namespace {
std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
}  // namespace

void CsvBuilder::emit_line(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += quote_csv(cells[i]);
  }
  body_ += '\n';
}

void CsvBuilder::header(const std::vector<std::string>& columns) {
  emit_line(columns);
  header_written_ = true;
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
  emit_line(cells);
}

void CsvBuilder::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  emit_line(cells);
}

}  // namespace solsim
