#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shb::io {

/// A numeric column file: '#'-prefixed provenance comments, one header row
/// naming the columns, then numeric rows. Parsing is locale-independent
/// ('.' decimal separator always).
struct TraceFile {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;  // without the leading '#'

  std::string schema() const;  // comma-joined column names

  /// Index of a named column; throws IoError when absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> values(std::string_view name) const;
};

TraceFile read_trace_file(const std::string& path);
TraceFile parse_trace_text(std::string_view text, std::string_view origin = "<memory>");

/// UTF-8, LF line endings, floats at 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// JSON array of flat records, same column/float conventions as the CSV.
void write_json_records(const std::string& path, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// FNV-1a 64-bit content digest, as "fnv1a64:<16 hex digits>".
std::string content_digest(std::string_view bytes);

}  // namespace shb::io
