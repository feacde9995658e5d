#pragma once

#include <string>
#include <vector>

namespace owal::io {

// Minimal CSV assembly: fixed column order, comma separator, LF line ends.
// Fields containing separators or quotes are quoted per RFC 4180.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& fields);

  const std::string& str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

}  // namespace owal::io
