// Copyright 2026 The Frasian Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// RFC 4180 reading and writing. Only what the command line needs: a header row
// followed by records, quoted fields with doubled quotes, LF or CRLF endings.

#ifndef FRASIAN_TOOLS_CSV_HPP_
#define FRASIAN_TOOLS_CSV_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frasian::cli {

// Bad or unreadable user input. Maps to the usage exit status.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
  // Every value of the named column as a finite double. `source` names the
  // input in error messages.
  std::vector<double> NumericColumn(std::string_view name, std::string_view source) const;
};

CsvTable ParseCsv(std::string_view text, std::string_view source);
CsvTable ReadCsvFile(const std::filesystem::path& path);

// Strict decimal parse of a whole field (surrounding blanks ignored).
double ParseNumber(std::string_view field, std::string_view what);

// Shortest text that reads back to the same double.
std::string FormatNumber(double x);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& Field(std::string_view text);
  CsvWriter& Field(double x) { return Field(FormatNumber(x)); }
  CsvWriter& Field(int x) { return Field(std::to_string(x)); }
  void EndRow();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace frasian::cli

#endif  // FRASIAN_TOOLS_CSV_HPP_
