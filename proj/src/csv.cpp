#include "shb/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shb/errors.hpp"
#include "shb/units.hpp"

namespace shb::io {

std::string TraceFile::schema() const {
  std::string out;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) {
      out += ',';
    }
    out += columns[k];
  }
  return out;
}

std::size_t TraceFile::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw IoError("no column '" + std::string(name) + "' (have: " + schema() + ")");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> TraceFile::values(std::string_view name) const {
  const std::size_t idx = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back(row[idx]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

}  // namespace

TraceFile parse_trace_text(std::string_view text, std::string_view origin) {
  TraceFile out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      out.comments.emplace_back(trim(line.substr(1)));
      continue;
    }
    if (!have_header) {
      for (const auto field : split_fields(line)) {
        out.columns.emplace_back(field);
      }
      have_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != out.columns.size()) {
      throw IoError(std::string(origin) + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(out.columns.size()) + " fields, got " +
                    std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto field : fields) {
      try {
        row.push_back(parse_number(field));
      } catch (const ConfigError& e) {
        throw IoError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    out.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw IoError(std::string(origin) + ": no header row");
  }
  return out;
}

TraceFile read_trace_file(const std::string& path) {
  return parse_trace_text(read_file(path), path);
}

void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& c : comments) {
    out += "# " + c + "\n";
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out += (k ? "," : "") + columns[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) {
        out += ',';
      }
      out += format_double(row[k]);
    }
    out += '\n';
  }
  write_file(path, out);
}

void write_json_records(const std::string& path, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows) {
  std::string out = "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += "  {";
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      if (k) {
        out += ", ";
      }
      out += "\"" + columns[k] + "\": " + format_double(rows[r][k]);
    }
    out += r + 1 < rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  write_file(path, out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw IoError("read failed on '" + path + "'");
  }
  return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) {
    throw IoError("write failed on '" + path + "'");
  }
}

std::string content_digest(std::string_view bytes) {
  // FNV-1a, 64-bit
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : std::string_view(bytes)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace shb::io
