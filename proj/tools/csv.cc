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

#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace frasian::cli {
namespace {

std::string_view Trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

bool NeedsQuotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

std::optional<std::size_t> CsvTable::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (Trim(header[i]) == name) return i;
  }
  return std::nullopt;
}

std::vector<double> CsvTable::NumericColumn(std::string_view name,
                                            std::string_view source) const {
  const auto col = ColumnIndex(name);
  if (!col) {
    throw InputError(std::string(source) + ": missing required column '" + std::string(name) +
                     "'");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (*col >= rows[r].size()) {
      throw InputError(std::string(source) + ": record " + std::to_string(r + 2) +
                       " has no '" + std::string(name) + "' field");
    }
    values.push_back(ParseNumber(rows[r][*col], std::string(source) + " record " +
                                                    std::to_string(r + 2)));
  }
  if (values.empty()) throw InputError(std::string(source) + ": no data records");
  return values;
}

CsvTable ParseCsv(std::string_view text, std::string_view source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    // A line holding nothing at all is skipped rather than read as one empty field.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      ++i;
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw InputError(std::string(source) + ": unterminated quoted field");
  if (field_started || !record.empty()) end_record();

  if (records.empty()) throw InputError(std::string(source) + ": empty file (header required)");
  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

CsvTable ReadCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("error while reading " + path.string());
  return ParseCsv(buf.str(), path.string());
}

double ParseNumber(std::string_view field, std::string_view what) {
  const std::string_view s = Trim(field);
  double x = 0.0;
  const char* first = s.data();
  // from_chars rejects a leading '+', which hand-written files do contain.
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw InputError(std::string(what) + ": not a finite number: '" + std::string(field) + "'");
  }
  return x;
}

std::string FormatNumber(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) Field(h);
  EndRow();
}

CsvWriter& CsvWriter::Field(std::string_view text) {
  if (in_row_ == columns_) throw std::logic_error("CSV row has too many fields");
  if (in_row_ > 0) out_ << ',';
  if (NeedsQuotes(text)) {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  } else {
    out_ << text;
  }
  ++in_row_;
  return *this;
}

void CsvWriter::EndRow() {
  if (in_row_ != columns_) throw std::logic_error("CSV row has too few fields");
  out_ << "\r\n";
  in_row_ = 0;
}

}  // namespace frasian::cli
