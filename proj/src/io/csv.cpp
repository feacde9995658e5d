#include "owal/io/csv.hpp"

#include <stdexcept>

namespace owal::io {

namespace {

std::string escape_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  add_row(header);
}

void CsvBuilder::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw std::invalid_argument("csv row width mismatch");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ += ',';
    out_ += escape_field(fields[i]);
  }
  out_ += '\n';
}

}  // namespace owal::io
